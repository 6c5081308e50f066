#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "ionnm/types.hpp"

namespace ionnm::oracle {

struct FockMode {
    double omega;
    std::complex<double> alpha;
};

/// A small exactly-solvable instance: M <= 4 modes in a truncated Fock space.
struct FockConfig {
    std::vector<FockMode> modes;
    int n_max = 10;  // per-mode cutoff

    std::size_t n_modes() const { return modes.size(); }
    int dim_per_mode() const { return n_max + 1; }
    /// Full Hilbert-space dimension including the spin.
    std::size_t total_dim() const;
    void validate() const;

    /// The M strongest-coupled modes of a coupling set, with all |alpha|^2
    /// rescaled by a common factor so max_j |alpha_j|^2 = max_alpha_sq.
    static FockConfig subsample(const CouplingSet& c, int m, double max_alpha_sq = 0.1);
};

/// Per-mode cutoff policy: thermal tail below 1e-6 plus displacement headroom,
/// n = max(10, n_thermal + 4*ceil(|alpha|)).
int required_cutoff(double beta, double omega, double alpha_abs);

/// Apply the cutoff policy for the given inverse temperature.
FockConfig with_cutoff_policy(FockConfig config, double beta);

/// Truncated displacement operator exp(alpha b^dag - alpha* b) built from the
/// truncated generator (exactly unitary on the truncated space).
Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim);

/// Population-weighted norm of the out-of-space block (1-P) D P, measured on
/// a padded space: ||(1-P) D P sqrt(rho)||_F with rho diagonal. Quantifies the
/// amplitude the truncation at `dim` actually cuts from the given state; the
/// bare operator norm of the block is O(1) for any alpha (the top Fock state
/// always spills) and carries no information about the simulated error.
double displacement_leakage(std::complex<double> alpha, int dim,
                            const Eigen::VectorXd& populations, int pad = 8);
/// Vacuum-column variant (T = 0 initial state).
double displacement_leakage(std::complex<double> alpha, int dim, int pad = 8);

/// Renormalized thermal populations of one truncated mode (trace exactly 1).
/// Throws cutoff_insufficient when the truncated tail exceeds 1e-6.
Eigen::VectorXd thermal_populations(double beta, double omega, int dim);

/// Product thermal state of all modes as a dense matrix (small dims only).
Eigen::MatrixXcd thermal_state(double beta, const FockConfig& config);

/// Evaluates the Ramsey protocol U_INT(-pi/2) U_0(t) U_INT(pi/2) exactly on
/// the truncated space via per-mode operator traces (no approximation beyond
/// the Fock cutoff). Matrices are cached per (config, beta).
class ProtocolEvolver {
  public:
    ProtocolEvolver(FockConfig config, double beta);

    /// Process tensor at time t: T[a'][b'](a,b) = tr_E[U_{aa'} rho_T U_{bb'}^dag],
    /// from which rho_S for any initial spin state is a bilinear assembly.
    struct Channel {
        Eigen::Matrix2cd block[2][2];
        Eigen::Matrix2cd apply(const Eigen::Vector2cd& spin) const;
    };
    Channel channel(double t) const;

    /// rho_S(t) for the pure initial state (theta, phi).
    Eigen::Matrix2cd reduced_state(double theta, double phi, double t) const;

    /// Trace distance between the protocol outputs of the antipodal pair
    /// (theta, phi) / (pi-theta, phi+pi) at each grid time.
    std::vector<double> pair_distance_curve(double theta, double phi,
                                            std::span<const double> times) const;

    const FockConfig& config() const { return config_; }
    double beta() const { return beta_; }

  private:
    FockConfig config_;
    double beta_;
    std::vector<Eigen::MatrixXcd> disp_;       // per-mode D(alpha_j)
    std::vector<Eigen::VectorXd> populations_; // per-mode thermal weights
};

/// One-shot convenience: rho_S(t) = tr_E[U rho_I U^dag].
Eigen::Matrix2cd reduced_state(double theta, double phi, double beta,
                               const FockConfig& config, double t);

/// Dense brute-force path on the full tensor space (validation of the
/// factorized evolver; small dimensions only).
Eigen::MatrixXcd protocol_unitary_dense(const FockConfig& config, double t);
Eigen::Matrix2cd reduced_state_dense(double theta, double phi, double beta,
                                     const FockConfig& config, double t);

/// D(rho1, rho2) = tr|rho1 - rho2| / 2 via singular values.
double trace_distance(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2);

struct CompareResult {
    double max_abs_dev = 0.0;
    double t_at = 0.0;
};

/// Max |D_oracle - D_opt| over the grid for the |+>/|-> pair, with the
/// analytic side evaluated from the same (omega_j, |alpha_j|^2).
/// `readings` selects the adopted or misread analytic formulas.
CompareResult compare_analytic(const ThermalSpec& thermal, const FockConfig& config,
                               std::span<const double> times,
                               bool coth_in_B = false, bool literal_xi = false);

} // namespace ionnm::oracle
