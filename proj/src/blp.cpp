#include "ionnm/blp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ionnm/dephasing.hpp"

namespace ionnm::blp {

namespace {

void check_uniform(const DephasingCurve& curve, std::size_t min_points) {
    if (curve.values.size() != curve.times.size())
        throw invalid_input("curve times/values size mismatch");
    if (curve.times.size() < min_points)
        throw invalid_input("curve has too few points");
    if (!(curve.dt > 0)) throw invalid_input("curve dt must be > 0");
    for (std::size_t i = 0; i + 1 < curve.times.size(); ++i) {
        const double step = curve.times[i + 1] - curve.times[i];
        if (std::abs(step - curve.dt) > 1e-9 * std::max(1.0, std::abs(curve.times[i + 1])))
            throw invalid_input("curve grid is not uniform");
    }
}

} // namespace

std::vector<double> information_flux(const DephasingCurve& curve) {
    check_uniform(curve, 3);
    const auto& d = curve.values;
    const double dt = curve.dt;
    std::vector<double> sigma(d.size());
    sigma.front() = (d[1] - d[0]) / dt;
    for (std::size_t i = 1; i + 1 < d.size(); ++i)
        sigma[i] = (d[i + 1] - d[i - 1]) / (2.0 * dt);
    sigma.back() = (d[d.size() - 1] - d[d.size() - 2]) / dt;
    return sigma;
}

NMResult blp_measure(const DephasingCurve& curve, double t_trunc) {
    check_uniform(curve, 2);
    const double t_end = curve.times.back();
    if (!(t_trunc > 0) || t_trunc > t_end * (1.0 + 1e-9))
        throw invalid_parameter("t_trunc must lie in (0, t_max]");
    double nm = 0.0;
    for (std::size_t i = 0; i + 1 < curve.values.size(); ++i) {
        if (curve.times[i + 1] > t_trunc * (1.0 + 1e-12)) break;
        const double inc = curve.values[i + 1] - curve.values[i];
        if (inc > 0) nm += inc;
    }
    NMResult r;
    r.value = nm;
    r.truncation_time = t_trunc;
    r.pair = BlochPair{M_PI / 2, 0.0};
    r.params = curve.params;
    r.thermal = curve.thermal;
    return r;
}

std::optional<double> revival_time(const DephasingCurve& curve, double threshold) {
    check_uniform(curve, 2);
    if (!(threshold > 0)) throw invalid_parameter("threshold must be > 0");
    const auto& d = curve.values;
    // end of the initial decay: the first increment that turns positive after
    // the curve has started to descend
    std::size_t i = 0;
    while (i + 1 < d.size() && !(d[i + 1] < d[i])) ++i;
    while (i + 1 < d.size() && !(d[i + 1] > d[i])) ++i;
    double gain = 0.0;
    for (; i + 1 < d.size(); ++i) {
        const double inc = d[i + 1] - d[i];
        if (inc > 0) {
            gain += inc;
            if (gain > threshold) return curve.times[i + 1];
        }
    }
    return std::nullopt;
}

std::vector<NMResult> sweep(const ChainParams& base, std::span<const double> deltas,
                            std::span<const double> beta_omega_max_values, double t_trunc,
                            double t_max, double dt, int jobs) {
    struct Point {
        double delta;
        double bo;
    };
    std::vector<Point> points;
    for (double bo : beta_omega_max_values)
        for (double delta : deltas) points.push_back({delta, bo});
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        if (a.bo != b.bo) return a.bo < b.bo;
        return a.delta < b.delta;
    });

    std::vector<NMResult> results(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= points.size()) return;
            ChainParams p = base;
            p.delta = points[idx].delta;
            ThermalSpec thermal{points[idx].bo};
            NMResult& r = results[idx];
            r.params = p;
            r.thermal = thermal;
            r.truncation_time = t_trunc;
            try {
                if (std::abs(p.delta) < 1e-5)
                    throw invalid_parameter("|delta| must be >= 1e-5 (harmonic validity)");
                r = blp_measure(dephasing::curve(p, thermal, t_max, dt), t_trunc);
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
            }
        }
    };
    if (jobs <= 1 || points.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(jobs, static_cast<int>(points.size()));
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

PairScanResult pair_scan(const oracle::FockConfig& config, const ThermalSpec& thermal,
                         int n_theta, int n_phi, double t_max, double dt, double t_trunc) {
    if (n_theta < 2 || n_phi < 1) throw invalid_parameter("pair grid too small");
    if (!(dt > 0) || !(t_max > 0) || !(t_trunc > 0) || t_trunc > t_max * (1 + 1e-9))
        throw invalid_parameter("bad pair_scan time grid");
    config.validate();

    double omega_max = 0.0;
    for (const auto& m : config.modes) omega_max = std::max(omega_max, m.omega);
    const double beta = thermal.zero_temperature() ? kInfinity : thermal.beta(omega_max);
    const oracle::ProtocolEvolver evolver(oracle::with_cutoff_policy(config, beta), beta);

    const auto n_t = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
    std::vector<double> times(n_t);
    for (std::size_t i = 0; i < n_t; ++i) times[i] = static_cast<double>(i) * dt;

    PairScanResult out;
    out.thetas.resize(n_theta);
    out.phis.resize(n_phi);
    for (int i = 0; i < n_theta; ++i) out.thetas[i] = M_PI * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) out.phis[j] = 2.0 * M_PI * j / n_phi;
    const std::size_t n_pairs = static_cast<std::size_t>(n_theta) * n_phi;

    // one channel evaluation per time serves every pair
    std::vector<double> prev(n_pairs, 0.0);
    std::vector<double> nm(n_pairs, 0.0);
    for (std::size_t it = 0; it < n_t; ++it) {
        if (times[it] > t_trunc * (1.0 + 1e-12)) break;
        const auto ch = evolver.channel(times[it]);
        for (int i = 0; i < n_theta; ++i) {
            for (int j = 0; j < n_phi; ++j) {
                const double th = out.thetas[i];
                const double ph = out.phis[j];
                const Eigen::Vector2cd psi1(std::cos(th / 2),
                                            std::polar(std::sin(th / 2), ph));
                const Eigen::Vector2cd psi2(std::cos((M_PI - th) / 2),
                                            std::polar(std::sin((M_PI - th) / 2), ph + M_PI));
                const double d = oracle::trace_distance(ch.apply(psi1), ch.apply(psi2));
                const std::size_t p = static_cast<std::size_t>(i) * n_phi + j;
                if (it > 0 && d > prev[p]) nm[p] += d - prev[p];
                prev[p] = d;
            }
        }
    }
    out.values = std::move(nm);
    std::size_t best = 0;
    for (std::size_t p = 1; p < n_pairs; ++p)
        if (out.values[p] > out.values[best]) best = p;
    out.best = BlochPair{out.thetas[best / n_phi], out.phis[best % n_phi]};
    out.best_value = out.values[best];
    return out;
}

} // namespace ionnm::blp
