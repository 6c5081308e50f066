#include "ionnm/dephasing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>

#include "ionnm/kernels.hpp"
#include "ionnm/lattice.hpp"

namespace ionnm::dephasing {

namespace {

constexpr double kCoupledThreshold = 1e-12;  // |s1| below this is a numerical zero

// coth-weighted |alpha|^2 per mode; the T = 0 path leaves the weights untouched
std::vector<double> thermal_weights(const ThermalSpec& thermal, const CouplingSet& c) {
    if (thermal.zero_temperature()) return c.alpha_sq;
    const double beta = thermal.beta(c.omega_max);
    std::vector<double> w(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        w[j] = c.alpha_sq[j] * thermal_weight(c.omega[j], beta);
    return w;
}

double sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// D_opt from the exponents, with xi_sum = sum_j |alpha_j|^2 coth_j so that
// xi^4 = exp(-2 xi_sum); xi^4/V computed as exp(A - 2 xi_sum), which never
// overflows since A <= 2 xi_sum
double assemble_distance(double a, double b, double xi_sum) {
    const double v = std::exp(-a);
    const double xi4 = std::exp(-2.0 * xi_sum);
    const double xi4_over_v = std::exp(a - 2.0 * xi_sum);
    const double d = 0.25 * std::abs(1.0 + 2.0 * std::cos(b) * (v - xi4_over_v) +
                                     std::exp(-4.0 * a) + 2.0 * xi4);
    return std::clamp(d, 0.0, 1.0);
}

void warn_high_temperature(const ThermalSpec& thermal) {
    // validity edge: the |+->-optimality assumption weakens for baths hotter
    // than beta*omega_max = 0.3
    static std::atomic<bool> warned{false};
    if (!thermal.zero_temperature() && thermal.beta_omega_max < 0.3 &&
        !warned.exchange(true)) {
        std::fprintf(stderr,
                     "ionnm: warning: beta_omega_max=%g below 0.3; optimal-pair "
                     "assumption unvalidated in this regime\n",
                     thermal.beta_omega_max);
    }
}

} // namespace

CouplingSet couplings(const ModeTable& table, double eta) {
    if (table.modes.empty()) throw invalid_parameter("mode table is empty");
    if (!(eta > 0)) throw invalid_parameter("eta must be > 0");
    CouplingSet c;
    c.omega.reserve(table.modes.size());
    c.alpha_sq.reserve(table.modes.size());
    for (const Mode& m : table.modes) {
        if (std::abs(m.s1) <= kCoupledThreshold) continue;
        if (!(m.omega > 0.0))
            throw soft_mode_divergence("coupled mode with omega = 0 (chain at criticality?)");
        c.omega.push_back(m.omega);
        c.alpha_sq.push_back(eta * eta * m.s1 * m.s1 / (2.0 * m.omega));
        c.omega_max = std::max(c.omega_max, m.omega);
    }
    if (c.omega.empty()) throw invalid_parameter("no coupled modes in table");
    return c;
}

double thermal_weight(double omega, double beta) {
    if (!(omega > 0)) throw invalid_parameter("thermal_weight requires omega > 0");
    if (std::isinf(beta)) return 1.0;
    if (!(beta > 0)) throw invalid_parameter("beta must be > 0 or infinite");
    return 1.0 / std::tanh(0.5 * omega * beta);
}

double decay_exponent_A(double t, const ThermalSpec& thermal, const CouplingSet& c) {
    if (!(t >= 0)) throw invalid_parameter("t must be >= 0");
    const std::vector<double> va = thermal_weights(thermal, c);
    // A = sum va_j (1 - cos omega_j t) = 2 sum va_j sin^2(omega_j t / 2)
    return kernels::mode_sums(c.omega, va, va, t).a;
}

double phase_B(double t, const CouplingSet& c) {
    return kernels::mode_sums(c.omega, c.alpha_sq, c.alpha_sq, t).b;
}

double xi(const ThermalSpec& thermal, const CouplingSet& c) {
    return std::exp(-0.5 * sum(thermal_weights(thermal, c)));
}

double visibility_V(double t, const ThermalSpec& thermal, const CouplingSet& c) {
    return std::exp(-decay_exponent_A(t, thermal, c));
}

double optimal_trace_distance(double t, const ThermalSpec& thermal, const CouplingSet& c) {
    if (!(t >= 0)) throw invalid_parameter("t must be >= 0");
    warn_high_temperature(thermal);
    const std::vector<double> va = thermal_weights(thermal, c);
    const auto sums = kernels::mode_sums(c.omega, va, c.alpha_sq, t);
    return assemble_distance(sums.a, sums.b, sum(va));
}

GridEval evaluate_grid(const CouplingSet& c, const ThermalSpec& thermal,
                       std::span<const double> times) {
    warn_high_temperature(thermal);
    const std::vector<double> va = thermal_weights(thermal, c);
    const double xi_sum = sum(va);
    GridEval g;
    g.A.resize(times.size());
    g.B.resize(times.size());
    g.V.resize(times.size());
    g.D.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto sums = kernels::mode_sums(c.omega, va, c.alpha_sq, times[i]);
        g.A[i] = sums.a;
        g.B[i] = sums.b;
        g.V[i] = std::exp(-sums.a);
        g.D[i] = assemble_distance(sums.a, sums.b, xi_sum);
    }
    return g;
}

DephasingCurve curve(const ChainParams& params, const ThermalSpec& thermal,
                     double t_max, double dt) {
    if (!(dt > 0) || !(t_max > 0)) throw invalid_parameter("t_max and dt must be > 0");
    const ModeTable table = params.delta > 0 ? lattice::linear_mode_table(params)
                                             : lattice::zigzag_mode_table(params);
    const CouplingSet c = couplings(table, params.eta);

    DephasingCurve out;
    out.dt = dt;
    out.params = params;
    out.thermal = thermal;
    const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
    out.times.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.times[i] = static_cast<double>(i) * dt;
    out.values = evaluate_grid(c, thermal, out.times).D;
    return out;
}

double phase_B_coth_misreading(double t, const ThermalSpec& thermal, const CouplingSet& c) {
    const std::vector<double> va = thermal_weights(thermal, c);
    return kernels::mode_sums(c.omega, va, va, t).b;
}

double xi_literal_misreading(const ThermalSpec& thermal, const CouplingSet& c) {
    // coth moved outside the exponent, applied per mode as a product
    double prod = 1.0;
    if (!thermal.zero_temperature()) {
        const double beta = thermal.beta(c.omega_max);
        for (double w : c.omega) prod *= thermal_weight(w, beta);
    }
    return std::exp(-0.5 * sum(c.alpha_sq)) * prod;
}

double trace_distance_with_readings(double t, const ThermalSpec& thermal,
                                    const CouplingSet& c, const FormulaReadings& readings) {
    const std::vector<double> va = thermal_weights(thermal, c);
    const double a = kernels::mode_sums(c.omega, va, va, t).a;
    const double b = readings.coth_in_B ? phase_B_coth_misreading(t, thermal, c)
                                        : phase_B(t, c);
    const double v = std::exp(-a);
    const double x = readings.literal_xi ? xi_literal_misreading(thermal, c)
                                         : xi(thermal, c);
    const double xi4 = std::pow(x, 4);
    const double d = 0.25 * std::abs(1.0 + 2.0 * std::cos(b) * (v - xi4 / v) +
                                     std::pow(v, 4) + 2.0 * xi4);
    return std::clamp(d, 0.0, 1.0);
}

} // namespace ionnm::dephasing
