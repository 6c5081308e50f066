#pragma once

#include <Eigen/Dense>

#include <span>

#include "ionnm/types.hpp"

namespace ionnm::lattice {

/// Critical transverse frequency nu_t^(c)(N) = 2*sqrt(sum_{j<=N/2} sin^2(j pi/2)/j^3).
/// Finite-N form: the k = pi soft mode vanishes exactly at delta = 0.
double critical_frequency(int n_ions);

/// Axial branch of the linear chain, omega_par(k) for k in [0, pi].
double axial_dispersion(double k, int n_ions);

/// Transverse branch, omega_perp(k) = sqrt(nu_t^2 - 4 sum sin^2(jk/2)/j^3).
/// Throws soft_mode_instability when the radicand is negative.
double transverse_dispersion(double k, double nu_t, int n_ions);

/// All 2N PBC modes of the linear phase (N transverse coupled via s1,
/// N axial with s1 = 0). Requires delta > 0.
ModeTable linear_mode_table(const ChainParams& params);

/// Transverse equilibrium distance b of the staggered zig-zag ansatz
/// r_j = (j, (-1)^j b/2). Returns 0 for delta >= 0.
double zigzag_equilibrium(const ChainParams& params);

/// Potential energy of the staggered ansatz at offset b (PBC minimum-image
/// Coulomb sum consistent with the dispersion relations; b-independent axial
/// terms included so energies at different b compare directly).
double zigzag_ansatz_energy(int n_ions, double nu_t, double b);

/// Potential energy for arbitrary planar displacements (u, y) from the zigzag
/// reference positions (j, (-1)^j b/2). Used by the full-minimization oracle.
double chain_energy(int n_ions, double nu_t, double b,
                    std::span<const double> u, std::span<const double> y);

/// 2N x 2N Hessian of the PBC potential in (x, y) displacements about the
/// staggered configuration with offset b (coordinates x_1..x_N, y_1..y_N).
Eigen::MatrixXd chain_hessian(int n_ions, double nu_t, double b);

/// 2N numeric modes from diagonalizing chain_hessian at the zig-zag
/// equilibrium. Requires delta < 0.
ModeTable zigzag_mode_table(const ChainParams& params);

/// Mode table from the Hessian at a prescribed offset b (zigzag_mode_table is
/// this at b = zigzag_equilibrium). Exposed for the b = 0 linear oracle.
ModeTable table_from_hessian(const ChainParams& params, double b);

} // namespace ionnm::lattice
