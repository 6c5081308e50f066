#pragma once

#include <stdexcept>

namespace ionnm {

struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// linear dispersion evaluated where the linear chain is not a stable equilibrium
struct soft_mode_instability : std::domain_error {
    using std::domain_error::domain_error;
};

// operation requested in the wrong structural phase (sign of delta)
struct wrong_phase : std::domain_error {
    using std::domain_error::domain_error;
};

// a coupled mode with vanishing frequency (only possible at delta = 0 exactly)
struct soft_mode_divergence : std::domain_error {
    using std::domain_error::domain_error;
};

// zig-zag Hessian has a genuinely negative eigenvalue
struct unstable_equilibrium : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// truncated Fock space cannot hold the requested thermal state
struct cutoff_insufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ionnm
