#include "ionnm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ionnm {

void ChainParams::validate() const {
    if (n_ions < 4 || n_ions % 2 != 0)
        throw invalid_parameter("n_ions must be even and >= 4, got " + std::to_string(n_ions));
    if (!(eta > 0)) throw invalid_parameter("eta must be > 0");
    if (target_ion < 1 || target_ion > n_ions)
        throw invalid_parameter("target_ion out of range");
    if (!std::isfinite(delta) || delta <= -1.0)
        throw invalid_parameter("delta must be finite and > -1");
}

double ChainParams::nu_t() const { return (1.0 + delta) * lattice::critical_frequency(n_ions); }

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::transverse_cos: return "transverse_cos";
        case Branch::transverse_sin: return "transverse_sin";
        case Branch::axial_cos: return "axial_cos";
        case Branch::axial_sin: return "axial_sin";
        case Branch::zigzag_numeric: return "zigzag_numeric";
    }
    return "?";
}

double ModeTable::omega_max() const {
    double m = 0.0;
    for (const Mode& mode : modes) m = std::max(m, mode.omega);
    return m;
}

} // namespace ionnm

namespace ionnm::lattice {

namespace {

void check_even(int n_ions) {
    if (n_ions < 4 || n_ions % 2 != 0)
        throw invalid_parameter("n_ions must be even and >= 4, got " + std::to_string(n_ions));
}

// sum_{j=1}^{N/2} sin^2(j k/2) / j^3
double dispersion_sum(double k, int n_ions) {
    double s = 0.0;
    for (int j = n_ions / 2; j >= 1; --j) {
        const double sn = std::sin(0.5 * j * k);
        s += sn * sn / (static_cast<double>(j) * j * j);
    }
    return s;
}

} // namespace

double critical_frequency(int n_ions) {
    check_even(n_ions);
    // sin^2(j pi/2) is exactly 1 for odd j, 0 for even j
    double s = 0.0;
    for (int j = n_ions / 2 - (n_ions / 2 % 2 == 0 ? 1 : 0); j >= 1; j -= 2)
        s += 1.0 / (static_cast<double>(j) * j * j);
    return 2.0 * std::sqrt(s);
}

double axial_dispersion(double k, int n_ions) {
    check_even(n_ions);
    if (!(k >= 0.0 && k <= M_PI + 1e-12))
        throw invalid_parameter("k must lie in [0, pi]");
    return std::sqrt(8.0 * dispersion_sum(k, n_ions));
}

double transverse_dispersion(double k, double nu_t, int n_ions) {
    check_even(n_ions);
    if (!(k >= 0.0 && k <= M_PI + 1e-12))
        throw invalid_parameter("k must lie in [0, pi]");
    const double r = nu_t * nu_t - 4.0 * dispersion_sum(k, n_ions);
    if (r < 0.0) {
        if (r > -1e-12 * nu_t * nu_t) return 0.0;  // criticality, to rounding
        throw soft_mode_instability("transverse radicand negative at k=" + std::to_string(k) +
                                    " (nu_t below critical)");
    }
    return std::sqrt(r);
}

ModeTable linear_mode_table(const ChainParams& params) {
    params.validate();
    if (!(params.delta > 0)) throw wrong_phase("linear_mode_table requires delta > 0");

    const int n = params.n_ions;
    const double nu_t = params.nu_t();
    const double x1 = static_cast<double>(params.target_ion);  // a = 1
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double amp = std::sqrt(2.0 / n);

    ModeTable table;
    table.phase = Phase::linear;
    table.params = params;
    table.modes.reserve(2 * static_cast<std::size_t>(n));

    for (int idx = 0; idx <= n / 2; ++idx) {
        const double k = 2.0 * M_PI * idx / n;
        const double wt = transverse_dispersion(k, nu_t, n);
        if (idx == 0) {
            table.modes.push_back({Branch::transverse_cos, idx, wt, inv_sqrt_n});
        } else if (idx == n / 2) {
            // cos(pi * x1) = +-1 exactly by parity of the target index
            const double edge = (params.target_ion % 2 == 0) ? inv_sqrt_n : -inv_sqrt_n;
            table.modes.push_back({Branch::transverse_cos, idx, wt, edge});
        } else {
            table.modes.push_back({Branch::transverse_cos, idx, wt, amp * std::cos(k * x1)});
            table.modes.push_back({Branch::transverse_sin, idx, wt, amp * std::sin(k * x1)});
        }
    }
    for (int idx = 0; idx <= n / 2; ++idx) {
        const double k = 2.0 * M_PI * idx / n;
        const double wa = axial_dispersion(k, n);
        table.modes.push_back({Branch::axial_cos, idx, wa, 0.0});
        if (idx != 0 && idx != n / 2)
            table.modes.push_back({Branch::axial_sin, idx, wa, 0.0});
    }
    return table;
}

double zigzag_ansatz_energy(int n_ions, double nu_t, double b) {
    check_even(n_ions);
    // per spec's PBC image convention: every ordered (j, s) with s = 1..N/2
    // interacts once, so the per-ion sum is over s; odd-s neighbours sit on the
    // opposite sublattice at transverse separation b
    double e = 0.125 * nu_t * nu_t * b * b;
    for (int s = 1; s <= n_ions / 2; ++s) {
        const double d = (s % 2 == 1) ? std::sqrt(static_cast<double>(s) * s + b * b)
                                      : static_cast<double>(s);
        e += 1.0 / d;
    }
    return e * n_ions;
}

double zigzag_equilibrium(const ChainParams& params) {
    params.validate();
    if (params.delta >= 0.0) return 0.0;  // linear phase is the minimizer

    const int n = params.n_ions;
    const double nu_t = params.nu_t();
    // stationarity of the staggered-ansatz energy: g(b) = nu_t^2/4 - sum_{odd s}(s^2+b^2)^(-3/2)
    // g is increasing in b with g(0) < 0 in the zigzag phase; bisection reaches
    // the 1e-12 relative tolerance a value-comparison search cannot (the
    // minimum is locally flat to machine precision at ~1e-8 widths).
    const auto g = [&](double b) {
        double s = 0.25 * nu_t * nu_t;
        for (int j = 1; j <= n / 2; j += 2) {
            const double d2 = static_cast<double>(j) * j + b * b;
            s -= 1.0 / (d2 * std::sqrt(d2));
        }
        return s;
    };
    double lo = 0.0, hi = 0.5;
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 64.0) throw unstable_equilibrium("zigzag offset bracket not found");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1e-3, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double chain_energy(int n_ions, double nu_t, double b,
                    std::span<const double> u, std::span<const double> y) {
    check_even(n_ions);
    if (u.size() != static_cast<std::size_t>(n_ions) || u.size() != y.size())
        throw invalid_parameter("displacement arrays must have n_ions entries");
    double e = 0.0;
    for (int j = 0; j < n_ions; ++j) {
        const double yj = ((j + 1) % 2 == 0 ? 0.5 * b : -0.5 * b) + y[j];
        e += 0.5 * nu_t * nu_t * yj * yj;
    }
    for (int j = 0; j < n_ions; ++j) {
        const double yj = ((j + 1) % 2 == 0 ? 0.5 * b : -0.5 * b) + y[j];
        for (int s = 1; s <= n_ions / 2; ++s) {
            const int p = (j + s) % n_ions;
            const double yp = ((p + 1) % 2 == 0 ? 0.5 * b : -0.5 * b) + y[p];
            const double dx = s + u[p] - u[j];
            const double dy = yp - yj;
            e += 1.0 / std::sqrt(dx * dx + dy * dy);
        }
    }
    return e;
}

Eigen::MatrixXd chain_hessian(int n_ions, double nu_t, double b) {
    check_even(n_ions);
    const int n = n_ions;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) h(n + j, n + j) += nu_t * nu_t;

    for (int j = 0; j < n; ++j) {
        const double yj = ((j + 1) % 2 == 0) ? 0.5 * b : -0.5 * b;
        for (int s = 1; s <= n / 2; ++s) {
            const int p = (j + s) % n;
            const double yp = ((p + 1) % 2 == 0) ? 0.5 * b : -0.5 * b;
            const double dx = s;  // fixed axial image offset
            const double dy = yp - yj;
            const double d2 = dx * dx + dy * dy;
            const double d = std::sqrt(d2);
            const double inv_d3 = 1.0 / (d2 * d);
            // Hessian of 1/|r| w.r.t. the relative displacement: (3 rr^T/d^2 - I)/d^3
            const double pxx = (3.0 * dx * dx / d2 - 1.0) * inv_d3;
            const double pxy = (3.0 * dx * dy / d2) * inv_d3;
            const double pyy = (3.0 * dy * dy / d2 - 1.0) * inv_d3;

            const int ja = j, jy = n + j, pa = p, py = n + p;
            h(ja, ja) += pxx; h(jy, jy) += pyy; h(ja, jy) += pxy; h(jy, ja) += pxy;
            h(pa, pa) += pxx; h(py, py) += pyy; h(pa, py) += pxy; h(py, pa) += pxy;
            h(ja, pa) -= pxx; h(jy, py) -= pyy; h(ja, py) -= pxy; h(jy, pa) -= pxy;
            h(pa, ja) -= pxx; h(py, jy) -= pyy; h(py, ja) -= pxy; h(pa, jy) -= pxy;
        }
    }
    return 0.5 * (h + h.transpose());
}

ModeTable table_from_hessian(const ChainParams& params, double b) {
    params.validate();
    const int n = params.n_ions;
    const Eigen::MatrixXd h = chain_hessian(n, params.nu_t(), b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw unstable_equilibrium("Hessian diagonalization failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    const Eigen::MatrixXd& vec = solver.eigenvectors();

    ModeTable table;
    table.phase = Phase::zigzag;
    table.params = params;
    table.zigzag_b = b;
    table.modes.reserve(2 * static_cast<std::size_t>(n));
    const int y_row = n + (params.target_ion - 1);
    for (int m = 0; m < 2 * n; ++m) {
        double lambda = ev(m);
        if (lambda < -1e-8)
            throw unstable_equilibrium("negative Hessian eigenvalue " + std::to_string(lambda));
        double s1 = vec(y_row, m);
        if (std::abs(lambda) < 1e-10) {
            lambda = 0.0;  // Goldstone translation; carries no coupling downstream
            s1 = 0.0;
        }
        table.modes.push_back({Branch::zigzag_numeric, m, std::sqrt(std::max(lambda, 0.0)), s1});
    }
    return table;
}

ModeTable zigzag_mode_table(const ChainParams& params) {
    params.validate();
    if (!(params.delta < 0)) throw wrong_phase("zigzag_mode_table requires delta < 0");
    return table_from_hessian(params, zigzag_equilibrium(params));
}

} // namespace ionnm::lattice
