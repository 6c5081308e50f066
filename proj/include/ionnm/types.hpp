#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ionnm/errors.hpp"

namespace ionnm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Trap/chain configuration. Dimensionless units throughout:
/// hbar = m = a = omega0 = 1, frequencies in units of omega0.
/// nu_t is derived from delta, so the pair stays consistent by construction.
struct ChainParams {
    int n_ions = 100;      // N, even, >= 4
    double delta = 0.1;    // relative distance from criticality, nu_t/nu_c - 1
    double eta = 0.5;      // Lamb-Dicke parameter
    int target_ion = 1;    // probed ion, sits at x = target_ion (a = 1)

    void validate() const;
    double nu_t() const;   // (1 + delta) * critical_frequency(n_ions)
};

enum class Branch {
    transverse_cos,
    transverse_sin,
    axial_cos,
    axial_sin,
    zigzag_numeric,
};

const char* branch_name(Branch b);

struct Mode {
    Branch branch;
    int k_index;    // n with k = 2*pi*n/N for analytic branches; eigenvector column for zigzag
    double omega;   // >= 0
    double s1;      // transverse (y) amplitude of the target ion in the orthonormal eigenvector
};

enum class Phase { linear, zigzag };

struct ModeTable {
    std::vector<Mode> modes;
    Phase phase = Phase::linear;
    ChainParams params;
    double zigzag_b = 0.0;  // transverse equilibrium distance (zigzag phase only)

    double omega_max() const;
};

/// Per-mode dephasing weights (omega_j, |alpha_j|^2), zero-frequency and
/// uncoupled modes excluded.
struct CouplingSet {
    std::vector<double> omega;
    std::vector<double> alpha_sq;
    double omega_max = 0.0;  // largest omega with nonzero coupling

    std::size_t size() const { return omega.size(); }
};

/// Temperature specified as beta*hbar*omega_max; infinity means T = 0.
struct ThermalSpec {
    double beta_omega_max = kInfinity;

    bool zero_temperature() const { return std::isinf(beta_omega_max); }
    /// beta in units of 1/omega0, given the coupled-mode band top.
    double beta(double omega_max) const {
        if (zero_temperature()) return kInfinity;
        if (!(beta_omega_max > 0)) throw invalid_parameter("beta_omega_max must be > 0");
        if (!(omega_max > 0)) throw invalid_parameter("omega_max must be > 0");
        return beta_omega_max / omega_max;
    }
};

/// Sampled optimal trace distance on a uniform time grid.
struct DephasingCurve {
    std::vector<double> times;   // t_i = i*dt
    std::vector<double> values;  // D_opt(t_i) in [0, 1]
    double dt = 0.0;
    ChainParams params;
    ThermalSpec thermal;
};

/// One member of an antipodal pure-state pair on the Bloch sphere.
struct BlochPair {
    double theta = M_PI / 2;
    double phi = 0.0;
};

struct NMResult {
    double value = 0.0;            // BLP measure, >= 0
    double truncation_time = 0.0;  // upper integration limit used
    BlochPair pair;
    ChainParams params;
    ThermalSpec thermal;
    bool failed = false;           // sweep bookkeeping for per-point errors
    std::string error;

    /// Contractivity-based classification with a fixed 1e-6 tolerance.
    bool non_markovian() const { return value > 1e-6; }
};

} // namespace ionnm
