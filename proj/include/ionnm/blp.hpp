#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ionnm/oracle.hpp"
#include "ionnm/types.hpp"

namespace ionnm::blp {

/// sigma(t) = dD/dt by central finite differences (one-sided at the ends).
/// Requires a uniform grid with at least 3 points.
std::vector<double> information_flux(const DephasingCurve& curve);

/// BLP measure on [0, t_trunc]: sum of positive increments of D, which equals
/// the integral of sigma^+ for the piecewise-linear interpolant. The pair is
/// fixed to |+>/|-> (theta = pi/2, phi = 0).
NMResult blp_measure(const DephasingCurve& curve, double t_trunc);

/// Earliest time at which the running sum of positive increments, started
/// after the zero-crossing of sigma that ends the initial decay, exceeds the
/// threshold; nullopt when the curve never backflows that much.
std::optional<double> revival_time(const DephasingCurve& curve, double threshold = 1e-3);

/// One NMResult per (delta, beta_omega_max) pair, ordered by (beta, delta).
/// Per-point failures are recorded in the result rather than thrown.
std::vector<NMResult> sweep(const ChainParams& base, std::span<const double> deltas,
                            std::span<const double> beta_omega_max_values, double t_trunc,
                            double t_max, double dt, int jobs = 1);

struct PairScanResult {
    BlochPair best;
    double best_value = 0.0;
    // row-major [i_theta * n_phi + i_phi] table of NM values
    std::vector<double> values;
    std::vector<double> thetas;
    std::vector<double> phis;
};

/// Exact-oracle BLP measure over an antipodal-pair grid
/// theta_i = i*pi/(n_theta-1), phi_j = j*2*pi/n_phi; validates the |+->
/// maximization assumption at oracle-tractable sizes.
PairScanResult pair_scan(const oracle::FockConfig& config, const ThermalSpec& thermal,
                         int n_theta, int n_phi, double t_max, double dt, double t_trunc);

} // namespace ionnm::blp
