#pragma once

#include <span>
#include <vector>

#include "ionnm/types.hpp"

namespace ionnm::dephasing {

/// Per-mode weights |alpha_j|^2 = eta^2 s1_j^2 / (2 omega_j) for every coupled
/// mode of the table. Zero-frequency and uncoupled (s1 = 0) modes are omitted;
/// a coupled mode at omega = 0 throws soft_mode_divergence.
CouplingSet couplings(const ModeTable& table, double eta);

/// coth(omega*beta/2); exactly 1 at T = 0 (beta = inf).
double thermal_weight(double omega, double beta);

/// A(t,beta) = 2 sum_j |alpha_j|^2 coth(omega_j beta/2) sin^2(omega_j t/2).
double decay_exponent_A(double t, const ThermalSpec& thermal, const CouplingSet& c);

/// B(t) = sum_j |alpha_j|^2 sin(omega_j t). Temperature-independent: the phase
/// of the protocol coherence comes from the displacement commutator, which
/// carries no thermal factor (verified against the exact Fock-space oracle;
/// see phase_B_coth_misreading for the discriminated alternative).
double phase_B(double t, const CouplingSet& c);

/// xi(beta) = exp(-1/2 sum_j |alpha_j|^2 coth(omega_j beta/2)).
double xi(const ThermalSpec& thermal, const CouplingSet& c);

/// V(t,beta) = exp(-A(t,beta)).
double visibility_V(double t, const ThermalSpec& thermal, const CouplingSet& c);

/// D_opt(t,beta) = 1/4 |1 + 2 cos(B) (V - xi^4/V) + V^4 + 2 xi^4|, clamped to [0,1].
double optimal_trace_distance(double t, const ThermalSpec& thermal, const CouplingSet& c);

/// The same quantities sampled on a time grid (single pass over the kernels).
struct GridEval {
    std::vector<double> A;
    std::vector<double> B;
    std::vector<double> V;
    std::vector<double> D;
};
GridEval evaluate_grid(const CouplingSet& c, const ThermalSpec& thermal,
                       std::span<const double> times);

/// Sample D_opt on the uniform grid t = 0, dt, ..., t_max for the chain
/// described by params (linear table for delta > 0, zigzag for delta < 0).
DephasingCurve curve(const ChainParams& params, const ThermalSpec& thermal,
                     double t_max, double dt);

/// Misreadings of the thermal formulas, kept only so the validation harness
/// can show the oracle rejects them.
double phase_B_coth_misreading(double t, const ThermalSpec& thermal, const CouplingSet& c);
double xi_literal_misreading(const ThermalSpec& thermal, const CouplingSet& c);

/// D_opt evaluated with selectable readings (validation harness only).
struct FormulaReadings {
    bool coth_in_B = false;   // misread phase
    bool literal_xi = false;  // misread xi
};
double trace_distance_with_readings(double t, const ThermalSpec& thermal,
                                    const CouplingSet& c, const FormulaReadings& readings);

} // namespace ionnm::dephasing
