#include "ionnm/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ionnm/dephasing.hpp"

namespace ionnm::oracle {

namespace {

constexpr double kThermalTailTol = 1e-6;
constexpr double kLeakageWarn = 1e-6;
constexpr std::size_t kDenseDimLimit = 40000;

// per-mode operator types entering the protocol blocks
enum OpType { kF = 0, kDFDd, kDF, kFD, kDdF, kFDd, kDdFD, kNumOps };

struct Term {
    std::complex<double> coef;
    OpType op;
};

// U = (1 + iG) U0 (1 - iG) / 2 expanded in the spin basis (e, g)
const Term kBlockTerms[2][2][2] = {
    {// row e
     {{{0.5, 0.0}, kF}, {{0.5, 0.0}, kDFDd}},   // U_ee
     {{{0.0, 0.5}, kDF}, {{0.0, -0.5}, kFD}}},  // U_eg
    {// row g
     {{{0.0, 0.5}, kDdF}, {{0.0, -0.5}, kFDd}}, // U_ge
     {{{0.5, 0.0}, kF}, {{0.5, 0.0}, kDdFD}}},  // U_gg
};

Eigen::Vector2cd bloch_state(double theta, double phi) {
    return {std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)};
}

} // namespace

std::size_t FockConfig::total_dim() const {
    std::size_t d = 2;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        d *= static_cast<std::size_t>(n_max + 1);
        if (d > 100'000'000) throw resource_limit("Fock dimension overflow");
    }
    return d;
}

void FockConfig::validate() const {
    if (modes.empty()) throw invalid_parameter("FockConfig needs at least one mode");
    if (modes.size() > 4) throw resource_limit("oracle restricted to M <= 4 modes");
    if (n_max < 1) throw invalid_parameter("n_max must be >= 1");
    for (const auto& m : modes)
        if (!(m.omega > 0)) throw invalid_parameter("oracle mode frequencies must be > 0");
}

FockConfig FockConfig::subsample(const CouplingSet& c, int m, double max_alpha_sq) {
    if (m < 1 || static_cast<std::size_t>(m) > c.size())
        throw invalid_parameter("subsample size out of range");
    if (m > 4) throw resource_limit("oracle restricted to M <= 4 modes");
    std::vector<std::size_t> idx(c.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (c.alpha_sq[a] != c.alpha_sq[b]) return c.alpha_sq[a] > c.alpha_sq[b];
        return c.omega[a] < c.omega[b];
    });
    const double scale = max_alpha_sq / c.alpha_sq[idx[0]];
    FockConfig config;
    for (int j = 0; j < m; ++j) {
        const double a2 = c.alpha_sq[idx[j]] * scale;
        config.modes.push_back({c.omega[idx[j]], {0.0, std::sqrt(a2)}});
    }
    std::sort(config.modes.begin(), config.modes.end(),
              [](const FockMode& a, const FockMode& b) { return a.omega < b.omega; });
    return config;
}

int required_cutoff(double beta, double omega, double alpha_abs) {
    if (!(omega > 0)) throw invalid_parameter("omega must be > 0");
    int n_thermal = 0;
    if (!std::isinf(beta)) {
        const double x = beta * omega;
        // smallest n with e^{-x(n+1)}/(1-e^{-x}) < tol
        const double need = std::log(1.0 / (kThermalTailTol * (1.0 - std::exp(-x)))) / x;
        n_thermal = std::max(0, static_cast<int>(std::ceil(need - 1.0)));
    }
    return std::max(10, n_thermal + 4 * static_cast<int>(std::ceil(alpha_abs)));
}

FockConfig with_cutoff_policy(FockConfig config, double beta) {
    int n = config.n_max;
    for (const auto& m : config.modes)
        n = std::max(n, required_cutoff(beta, m.omega, std::abs(m.alpha)));
    config.n_max = n;
    return config;
}

Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim) {
    if (dim < 1) throw invalid_parameter("dim must be >= 1");
    // D = exp(alpha b^dag - alpha* b) = exp(-iH), H = i(alpha b^dag - alpha* b)
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    const std::complex<double> i1(0.0, 1.0);
    for (int n = 1; n < dim; ++n) {
        const double r = std::sqrt(static_cast<double>(n));
        h(n, n - 1) = i1 * alpha * r;
        h(n - 1, n) = -i1 * std::conj(alpha) * r;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phase(dim);
    for (int n = 0; n < dim; ++n) phase(n) = std::polar(1.0, -lam(n));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

double displacement_leakage(std::complex<double> alpha, int dim,
                            const Eigen::VectorXd& populations, int pad) {
    if (populations.size() != dim) throw invalid_parameter("populations size mismatch");
    const Eigen::MatrixXcd big = displacement_matrix(alpha, dim + pad);
    double acc = 0.0;
    for (int m = dim; m < dim + pad; ++m)
        for (int n = 0; n < dim; ++n) acc += std::norm(big(m, n)) * populations(n);
    return std::sqrt(acc);
}

double displacement_leakage(std::complex<double> alpha, int dim, int pad) {
    Eigen::VectorXd vac = Eigen::VectorXd::Zero(dim);
    vac(0) = 1.0;
    return displacement_leakage(alpha, dim, vac, pad);
}

Eigen::VectorXd thermal_populations(double beta, double omega, int dim) {
    if (!(omega > 0)) throw invalid_parameter("omega must be > 0");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    if (std::isinf(beta)) {
        p(0) = 1.0;
        return p;
    }
    if (!(beta > 0)) throw invalid_parameter("beta must be > 0 or infinite");
    const double x = std::exp(-beta * omega);
    if (std::pow(x, dim) / (1.0 - x) >= kThermalTailTol)
        throw cutoff_insufficient("thermal tail above 1e-6 at n_max=" + std::to_string(dim - 1));
    for (int n = 0; n < dim; ++n) p(n) = std::pow(x, n);
    p /= p.sum();  // renormalize after truncation: trace exactly 1
    return p;
}

Eigen::MatrixXcd thermal_state(double beta, const FockConfig& config) {
    config.validate();
    if (config.total_dim() / 2 > kDenseDimLimit)
        throw resource_limit("thermal_state matrix would be too large");
    Eigen::VectorXd diag(1);
    diag(0) = 1.0;
    for (const auto& m : config.modes) {
        const Eigen::VectorXd p = thermal_populations(beta, m.omega, config.dim_per_mode());
        Eigen::VectorXd next(diag.size() * p.size());
        for (Eigen::Index a = 0; a < diag.size(); ++a)
            for (Eigen::Index b = 0; b < p.size(); ++b)
                next(a * p.size() + b) = diag(a) * p(b);
        diag = std::move(next);
    }
    return diag.cast<std::complex<double>>().asDiagonal();
}

ProtocolEvolver::ProtocolEvolver(FockConfig config, double beta)
    : config_(std::move(config)), beta_(beta) {
    config_.validate();
    const int dim = config_.dim_per_mode();
    static std::atomic<bool> warned{false};
    for (const auto& m : config_.modes) {
        disp_.push_back(displacement_matrix(m.alpha, dim));
        populations_.push_back(thermal_populations(beta_, m.omega, dim));
        const double leak = displacement_leakage(m.alpha, dim, populations_.back());
        if (leak > kLeakageWarn && !warned.exchange(true)) {
            std::fprintf(stderr,
                         "ionnm: warning: displacement leakage %.3e above %.0e at n_max=%d "
                         "(reduced-state error ~ leakage^2; further warnings suppressed)\n",
                         leak, kLeakageWarn, config_.n_max);
        }
    }
}

Eigen::Matrix2cd ProtocolEvolver::Channel::apply(const Eigen::Vector2cd& spin) const {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rho += spin(a) * std::conj(spin(b)) * block[a][b];
    return rho;
}

ProtocolEvolver::Channel ProtocolEvolver::channel(double t) const {
    if (!(t >= 0)) throw invalid_parameter("t must be >= 0");
    const int dim = config_.dim_per_mode();

    // product over modes of the per-mode trace table tr[Xa rho Xb^dag]
    std::complex<double> pi_tab[kNumOps][kNumOps];
    for (auto& row : pi_tab)
        for (auto& v : row) v = 1.0;

    for (std::size_t j = 0; j < config_.modes.size(); ++j) {
        const Eigen::MatrixXcd& d = disp_[j];
        const Eigen::MatrixXcd dadj = d.adjoint();
        Eigen::VectorXcd f(dim);
        for (int n = 0; n < dim; ++n) f(n) = std::polar(1.0, -config_.modes[j].omega * n * t);

        Eigen::MatrixXcd ops[kNumOps];
        ops[kF] = Eigen::MatrixXcd(f.asDiagonal());
        ops[kDF] = d * f.asDiagonal();
        ops[kFD] = f.asDiagonal() * d;
        ops[kDdF] = dadj * f.asDiagonal();
        ops[kFDd] = f.asDiagonal() * dadj;
        ops[kDFDd] = d * ops[kFDd];
        ops[kDdFD] = dadj * ops[kFD];

        const Eigen::VectorXd& p = populations_[j];
        for (int a = 0; a < kNumOps; ++a) {
            for (int b = a; b < kNumOps; ++b) {
                // tr[Xa rho Xb^dag] = sum_{m,n} Xa(m,n) p(n) conj(Xb(m,n))
                const std::complex<double> tau =
                    (ops[a].cwiseProduct(ops[b].conjugate()) * p).sum();
                pi_tab[a][b] *= tau;
                if (b != a) pi_tab[b][a] *= std::conj(tau);
            }
        }
    }

    Channel ch;
    for (int ap = 0; ap < 2; ++ap) {
        for (int bp = 0; bp < 2; ++bp) {
            Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    std::complex<double> acc = 0.0;
                    for (const Term& tp : kBlockTerms[a][ap])
                        for (const Term& tq : kBlockTerms[b][bp])
                            acc += tp.coef * std::conj(tq.coef) * pi_tab[tp.op][tq.op];
                    m(a, b) = acc;
                }
            }
            ch.block[ap][bp] = m;
        }
    }
    return ch;
}

Eigen::Matrix2cd ProtocolEvolver::reduced_state(double theta, double phi, double t) const {
    return channel(t).apply(bloch_state(theta, phi));
}

std::vector<double> ProtocolEvolver::pair_distance_curve(double theta, double phi,
                                                         std::span<const double> times) const {
    std::vector<double> out;
    out.reserve(times.size());
    const Eigen::Vector2cd psi1 = bloch_state(theta, phi);
    const Eigen::Vector2cd psi2 = bloch_state(M_PI - theta, phi + M_PI);
    for (double t : times) {
        const Channel ch = channel(t);
        out.push_back(trace_distance(ch.apply(psi1), ch.apply(psi2)));
    }
    return out;
}

Eigen::Matrix2cd reduced_state(double theta, double phi, double beta,
                               const FockConfig& config, double t) {
    return ProtocolEvolver(with_cutoff_policy(config, beta), beta).reduced_state(theta, phi, t);
}

Eigen::MatrixXcd protocol_unitary_dense(const FockConfig& config, double t) {
    config.validate();
    const std::size_t dim = config.total_dim();
    if (dim > kDenseDimLimit) throw resource_limit("dense unitary too large");
    const std::size_t de = dim / 2;
    const int dm = config.dim_per_mode();

    Eigen::MatrixXcd dbig = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& m : config.modes) {
        const Eigen::MatrixXcd dj = displacement_matrix(m.alpha, dm);
        Eigen::MatrixXcd next(dbig.rows() * dm, dbig.cols() * dm);
        for (Eigen::Index r = 0; r < dbig.rows(); ++r)
            for (Eigen::Index c = 0; c < dbig.cols(); ++c)
                next.block(r * dm, c * dm, dm, dm) = dbig(r, c) * dj;
        dbig = std::move(next);
    }

    Eigen::VectorXcd env_phase(de);
    for (std::size_t idx = 0; idx < de; ++idx) {
        double energy = 0.0;
        std::size_t rem = idx;
        for (std::size_t j = config.modes.size(); j-- > 0;) {
            energy += config.modes[j].omega * static_cast<double>(rem % dm);
            rem /= dm;
        }
        env_phase(idx) = std::polar(1.0, -energy * t);
    }

    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    g.block(0, de, de, de) = dbig;
    g.block(de, 0, de, de) = dbig.adjoint();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    const std::complex<double> i1(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Eigen::MatrixXcd pulse_fwd = inv_sqrt2 * (id - i1 * g);
    const Eigen::MatrixXcd pulse_bwd = inv_sqrt2 * (id + i1 * g);

    Eigen::VectorXcd u0(dim);
    u0.head(de) = env_phase;
    u0.tail(de) = env_phase;
    return pulse_bwd * (u0.asDiagonal() * pulse_fwd);
}

Eigen::Matrix2cd reduced_state_dense(double theta, double phi, double beta,
                                     const FockConfig& config, double t) {
    const std::size_t dim = config.total_dim();
    if (dim > 4000) throw resource_limit("dense reduced state too large");
    const std::size_t de = dim / 2;
    const Eigen::MatrixXcd u = protocol_unitary_dense(config, t);
    const Eigen::MatrixXcd rho_env = thermal_state(beta, config);
    const Eigen::Vector2cd psi = bloch_state(theta, phi);

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            rho.block(a * de, b * de, de, de) = psi(a) * std::conj(psi(b)) * rho_env;
    const Eigen::MatrixXcd evolved = u * rho * u.adjoint();

    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out(a, b) = evolved.block(a * de, b * de, de, de).trace();
    return out;
}

double trace_distance(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2) {
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
        throw invalid_parameter("trace_distance dimension mismatch");
    const Eigen::MatrixXcd delta = rho1 - rho2;
    return 0.5 * delta.jacobiSvd().singularValues().sum();
}

CompareResult compare_analytic(const ThermalSpec& thermal, const FockConfig& config,
                               std::span<const double> times, bool coth_in_B,
                               bool literal_xi) {
    config.validate();
    CouplingSet c;
    for (const auto& m : config.modes) {
        c.omega.push_back(m.omega);
        c.alpha_sq.push_back(std::norm(m.alpha));
        c.omega_max = std::max(c.omega_max, m.omega);
    }
    const double beta = thermal.zero_temperature() ? kInfinity : thermal.beta(c.omega_max);
    const ProtocolEvolver evolver(with_cutoff_policy(config, beta), beta);
    const std::vector<double> d_oracle =
        evolver.pair_distance_curve(M_PI / 2, 0.0, times);

    const dephasing::FormulaReadings readings{coth_in_B, literal_xi};
    CompareResult result;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d_opt =
            dephasing::trace_distance_with_readings(times[i], thermal, c, readings);
        const double dev = std::abs(d_oracle[i] - d_opt);
        if (dev > result.max_abs_dev) {
            result.max_abs_dev = dev;
            result.t_at = times[i];
        }
    }
    return result;
}

} // namespace ionnm::oracle
