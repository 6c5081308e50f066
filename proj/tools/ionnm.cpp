// Command-line front end: curve/sweep/spectrum data emission and the
// oracle-backed validation suite.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ionnm/blp.hpp"
#include "ionnm/dephasing.hpp"
#include "ionnm/kernels.hpp"
#include "ionnm/lattice.hpp"
#include "ionnm/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitBadParameters = 2;
constexpr int kExitPartialSweep = 3;

struct RunConfig {
    std::string mode;
    int n_ions = 100;
    double delta = 0.1;
    std::vector<double> delta_list;
    std::vector<double> beta_omega_max{0.3};
    double eta = 0.5;
    int target_ion = 1;
    double t_max = 200.0;
    double dt = 0.01;
    double t_trunc = 120.0;
    std::string out;
    int jobs = 1;
    std::string format = "csv";
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt(v[i]);
    }
    return s;
}

// every output embeds the complete resolved configuration
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    return {
        {"mode", cfg.mode},
        {"n_ions", std::to_string(cfg.n_ions)},
        {"delta", fmt(cfg.delta)},
        {"delta_list", join(cfg.delta_list)},
        {"beta_omega_max", join(cfg.beta_omega_max)},
        {"eta", fmt(cfg.eta)},
        {"target_ion", std::to_string(cfg.target_ion)},
        {"t_max", fmt(cfg.t_max)},
        {"dt", fmt(cfg.dt)},
        {"t_trunc", fmt(cfg.t_trunc)},
        {"jobs", std::to_string(cfg.jobs)},
        {"format", cfg.format},
        {"kernel", std::string(ionnm::kernels::active_kernel())},
    };
}

void write_table(const RunConfig& cfg, const std::string& path,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    if (cfg.format == "json") {
        nlohmann::ordered_json doc;
        for (const auto& [k, v] : config_echo(cfg)) doc["config"][k] = v;
        doc["columns"] = columns;
        auto& out_rows = doc["rows"];
        out_rows = nlohmann::ordered_json::array();
        for (const auto& r : rows) out_rows.push_back(r);
        f << doc.dump(1) << "\n";
    } else {
        for (const auto& [k, v] : config_echo(cfg)) f << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            f << (i ? "," : "") << columns[i];
        f << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << fmt(r[i]);
            f << "\n";
        }
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string combo_path(const std::string& base, double delta, double bo, bool single,
                       const std::string& format) {
    std::filesystem::path p(base.empty() ? std::string("ionnm_out") : base);
    if (base.empty()) p += format == "json" ? ".json" : ".csv";
    if (single) return p.string();
    std::filesystem::path stem = p;
    stem.replace_extension();
    std::string ext = p.extension().string();
    if (ext.empty()) ext = format == "json" ? ".json" : ".csv";
    return stem.string() + "_d" + fmt(delta) + "_b" + fmt(bo) + ext;
}

void check_delta(double delta) {
    if (std::abs(delta) < 1e-5)
        throw ionnm::invalid_parameter("|delta| must be >= 1e-5 (harmonic validity)");
}

std::vector<double> resolved_deltas(const RunConfig& cfg) {
    return cfg.delta_list.empty() ? std::vector<double>{cfg.delta} : cfg.delta_list;
}

int run_curve(const RunConfig& cfg) {
    const std::vector<double> deltas = resolved_deltas(cfg);
    const bool single = deltas.size() == 1 && cfg.beta_omega_max.size() == 1;
    const auto n = static_cast<std::size_t>(std::floor(cfg.t_max / cfg.dt + 1e-9)) + 1;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) * cfg.dt;

    for (double delta : deltas) {
        check_delta(delta);
        ionnm::ChainParams params{cfg.n_ions, delta, cfg.eta, cfg.target_ion};
        const ionnm::ModeTable table = delta > 0 ? ionnm::lattice::linear_mode_table(params)
                                                 : ionnm::lattice::zigzag_mode_table(params);
        const ionnm::CouplingSet coup = ionnm::dephasing::couplings(table, cfg.eta);
        for (double bo : cfg.beta_omega_max) {
            const ionnm::ThermalSpec thermal{bo};
            const auto grid = ionnm::dephasing::evaluate_grid(coup, thermal, times);
            std::vector<std::vector<double>> rows(n);
            for (std::size_t i = 0; i < n; ++i)
                rows[i] = {times[i], grid.D[i], grid.A[i], grid.B[i], grid.V[i]};
            RunConfig echo = cfg;
            echo.delta = delta;
            echo.beta_omega_max = {bo};
            echo.delta_list.clear();
            write_table(echo, combo_path(cfg.out, delta, bo, single, cfg.format),
                        {"t", "D_opt", "A", "B", "V"}, rows);
        }
    }
    return kExitOk;
}

int run_spectrum(const RunConfig& cfg) {
    check_delta(cfg.delta);
    ionnm::ChainParams params{cfg.n_ions, cfg.delta, cfg.eta, cfg.target_ion};
    const ionnm::ModeTable table = cfg.delta > 0 ? ionnm::lattice::linear_mode_table(params)
                                                 : ionnm::lattice::zigzag_mode_table(params);
    std::string path = cfg.out.empty() ? ("spectrum." + cfg.format) : cfg.out;
    if (cfg.format == "json") {
        nlohmann::ordered_json doc;
        for (const auto& [k, v] : config_echo(cfg)) doc["config"][k] = v;
        doc["columns"] = {"branch", "k_index", "omega", "s1"};
        auto& rows = doc["rows"];
        rows = nlohmann::ordered_json::array();
        for (const auto& m : table.modes)
            rows.push_back({ionnm::branch_name(m.branch), m.k_index, m.omega, m.s1});
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << doc.dump(1) << "\n";
    } else {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        for (const auto& [k, v] : config_echo(cfg)) f << "# " << k << "=" << v << "\n";
        f << "branch,k_index,omega,s1\n";
        for (const auto& m : table.modes)
            f << ionnm::branch_name(m.branch) << "," << m.k_index << "," << fmt(m.omega)
              << "," << fmt(m.s1) << "\n";
    }
    return kExitOk;
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.delta_list.empty())
        throw ionnm::invalid_parameter("sweep mode requires --delta-list");
    ionnm::ChainParams base{cfg.n_ions, cfg.delta, cfg.eta, cfg.target_ion};
    // curves only need to reach the truncation time
    const auto results = ionnm::blp::sweep(base, cfg.delta_list, cfg.beta_omega_max,
                                           cfg.t_trunc, cfg.t_trunc, cfg.dt, cfg.jobs);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;
    for (const auto& r : results) {
        if (r.failed) {
            errors.push_back("delta=" + fmt(r.params.delta) +
                             " beta_omega_max=" + fmt(r.thermal.beta_omega_max) + ": " + r.error);
            continue;
        }
        rows.push_back({r.params.delta, r.thermal.beta_omega_max, r.value, r.truncation_time});
    }
    const std::string path = cfg.out.empty() ? ("sweep." + cfg.format) : cfg.out;
    write_table(cfg, path, {"delta", "beta_omega_max", "nm_value", "t_trunc"}, rows);
    if (!errors.empty()) {
        std::ofstream ef(path + ".errors");
        for (const auto& e : errors) ef << e << "\n";
        std::cerr << "ionnm: " << errors.size() << " sweep point(s) failed, see " << path
                  << ".errors\n";
        return kExitPartialSweep;
    }
    return kExitOk;
}

int run_validate(const RunConfig& cfg) {
    using ionnm::oracle::FockConfig;
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_ok &= ok;
    };

    ionnm::ChainParams params{cfg.n_ions, 0.1, cfg.eta, cfg.target_ion};
    const ionnm::CouplingSet full =
        ionnm::dephasing::couplings(ionnm::lattice::linear_mode_table(params), cfg.eta);
    std::vector<double> times;
    for (double t = 0.0; t <= 50.0 + 1e-9; t += 0.1) times.push_back(t);

    for (int m = 1; m <= 3; ++m) {
        const FockConfig config = FockConfig::subsample(full, m);
        const auto r = ionnm::oracle::compare_analytic(ionnm::ThermalSpec{}, config, times);
        report("T=0 oracle equivalence M=" + std::to_string(m), r.max_abs_dev < 1e-8,
               "max dev " + fmt(r.max_abs_dev) + " at t=" + fmt(r.t_at) + " (bound 1e-8)");
    }
    for (double bo : {0.7, 4.3}) {
        for (int m = 1; m <= 3; ++m) {
            const FockConfig config = FockConfig::subsample(full, m);
            const ionnm::ThermalSpec thermal{bo};
            const auto r = ionnm::oracle::compare_analytic(thermal, config, times);
            report("T>0 oracle equivalence M=" + std::to_string(m) + " bo=" + fmt(bo),
                   r.max_abs_dev < 1e-2, "max dev " + fmt(r.max_abs_dev) + " (bound 1e-2)");
            if (m == 2) {
                const auto bad_xi =
                    ionnm::oracle::compare_analytic(thermal, config, times, false, true);
                report("xi misreading discriminated bo=" + fmt(bo),
                       bad_xi.max_abs_dev > r.max_abs_dev,
                       "coth-outside-exponent dev " + fmt(bad_xi.max_abs_dev) + " > adopted " +
                           fmt(r.max_abs_dev));
                const auto bad_b =
                    ionnm::oracle::compare_analytic(thermal, config, times, true, false);
                report("B misreading discriminated bo=" + fmt(bo),
                       bad_b.max_abs_dev > r.max_abs_dev,
                       "coth-in-B dev " + fmt(bad_b.max_abs_dev) + " > adopted " +
                           fmt(r.max_abs_dev));
            }
        }
    }

    const FockConfig config2 = FockConfig::subsample(full, 2);
    for (double bo : {ionnm::kInfinity, 0.7}) {
        const auto scan =
            ionnm::blp::pair_scan(config2, ionnm::ThermalSpec{bo}, 16, 8, 50.0, 0.1, 50.0);
        const double step = M_PI / 15;
        report("pair_scan equatorial bo=" + fmt(bo),
               std::abs(scan.best.theta - M_PI / 2) <= step + 1e-12,
               "argmax theta=" + fmt(scan.best.theta) + " phi=" + fmt(scan.best.phi) +
                   " NM=" + fmt(scan.best_value));
        // the pulses sit inside the protocol channel, so pole pairs are not
        // invariant; they must still backflow strictly less than the equator
        double pole_max = 0.0;
        for (std::size_t j = 0; j < scan.phis.size(); ++j) {
            pole_max = std::max(pole_max, scan.values[j]);
            pole_max = std::max(pole_max, scan.values[(scan.thetas.size() - 1) * scan.phis.size() + j]);
        }
        report("pole pairs below the equatorial maximum bo=" + fmt(bo),
               pole_max < scan.best_value,
               "max pole NM " + fmt(pole_max) + " < " + fmt(scan.best_value));
    }
    return all_ok ? kExitOk : kExitValidationFailure;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Ramsey dephasing and BLP non-Markovianity in ion Coulomb crystals"};
    app.option_defaults()->always_capture_default();

    app.add_option("--mode", cfg.mode, "curve | sweep | validate | spectrum")
        ->required()
        ->check(CLI::IsMember({"curve", "sweep", "validate", "spectrum"}));
    app.add_option("--n-ions", cfg.n_ions, "chain size N (even, >= 4)");
    app.add_option("--delta", cfg.delta, "relative distance from criticality");
    app.add_option("--delta-list", cfg.delta_list, "comma-separated deltas (sweep)")
        ->delimiter(',');
    app.add_option("--beta-omega-max", cfg.beta_omega_max,
                   "beta*hbar*omega_max value(s); inf = T=0")
        ->delimiter(',');
    app.add_option("--eta", cfg.eta, "Lamb-Dicke parameter");
    app.add_option("--target-ion", cfg.target_ion, "probed ion index");
    app.add_option("--t-max", cfg.t_max, "time grid end (units 1/omega0)");
    app.add_option("--dt", cfg.dt, "time grid step");
    app.add_option("--t-trunc", cfg.t_trunc, "BLP truncation time");
    app.add_option("--out", cfg.out, "output path");
    app.add_option("--jobs", cfg.jobs, "sweep worker threads");
    app.add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.set_config("--config", std::getenv("IONNM_CONFIG") ? std::getenv("IONNM_CONFIG") : "",
                   "key=value config file (flags override)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadParameters;
    }

    try {
        if (cfg.mode == "curve") return run_curve(cfg);
        if (cfg.mode == "sweep") return run_sweep(cfg);
        if (cfg.mode == "spectrum") return run_spectrum(cfg);
        return run_validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "ionnm: error: " << e.what() << "\n";
        return kExitBadParameters;
    }
}
