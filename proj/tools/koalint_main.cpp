// koalint: build the oscillator/coalgebra Hamiltonian families, machine-check
// their conservation laws, and integrate their dynamics.
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 config error,
// 3 sampling exhausted, 4 runtime singularity or integration failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "koalint/driver.hpp"
#include "koalint/report.hpp"

using namespace koalint;

namespace {

int to_exit_code(const Error& e) {
    if (dynamic_cast<const ConfigInvalid*>(&e)) return 2;
    if (dynamic_cast<const SamplingExhausted*>(&e)) return 3;
    if (dynamic_cast<const SingularEncounter*>(&e) || dynamic_cast<const SingularPoint*>(&e) ||
        dynamic_cast<const DegenerateDenominator*>(&e) || dynamic_cast<const StepUnderflow*>(&e))
        return 4;
    return 2;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

void warn_overflow_risk(const config::SystemConfig& cfg) {
    if (cfg.family == config::Family::comodule) return;
    // sampling box has |q_i| <= 2
    if (std::abs(cfg.z) * cfg.n * 4.0 > 30.0)
        std::cerr << "warning: z*N*max(q^2) = " << std::abs(cfg.z) * cfg.n * 4.0
                  << " > 30; exponential factors may overflow\n";
}

std::vector<double> parse_csv_doubles(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigInvalid(what + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

struct CommonOverrides {
    std::int64_t seed = -1;
    int points = -1;
    double tol = -1.0;
    int max_n = 12;

    void apply(config::SystemConfig& cfg) const {
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (points > 0) cfg.n_points = points;
        if (tol > 0.0) cfg.tol = tol;
    }
};

int cmd_verify(const std::string& config_path, const std::string& out_path, bool no_timestamp,
               const CommonOverrides& common) {
    config::SystemConfig cfg = config::load_config(config_path, common.max_n);
    common.apply(cfg);
    warn_overflow_risk(cfg);

    auto sys = config::build_system(cfg);
    auto results = driver::run_verification(sys);
    const std::string rendered = report::render_verify_report(results, !no_timestamp);
    if (!out_path.empty())
        write_file(out_path, rendered);
    else
        std::cout << rendered;

    if (!out_path.empty()) {
        std::cout << (results.all_pass() ? "PASS" : "FAIL") << " (" << config::family_name(cfg.family)
                  << ", N=" << cfg.n << ", report: " << out_path << ")\n";
    }
    return results.all_pass() ? 0 : 1;
}

int cmd_integrate(const std::string& config_path, double t_end, double dt,
                  const std::string& method, const std::string& out_path, const std::string& q0,
                  const std::string& p0, const CommonOverrides& common) {
    config::SystemConfig cfg = config::load_config(config_path, common.max_n);
    common.apply(cfg);
    warn_overflow_risk(cfg);
    auto sys = config::build_system(cfg);

    PhasePoint x0 = sys.default_initial_state;
    if (!q0.empty() || !p0.empty()) {
        auto qs = q0.empty() ? x0.q : parse_csv_doubles(q0, "--q0");
        auto ps = p0.empty() ? x0.p : parse_csv_doubles(p0, "--p0");
        if (static_cast<int>(qs.size()) != cfg.n || static_cast<int>(ps.size()) != cfg.n)
            throw ConfigInvalid("--q0/--p0 must each carry N = " + std::to_string(cfg.n) +
                                " values");
        x0 = PhasePoint(std::move(qs), std::move(ps));
    }

    dynamics::Options opt;
    opt.method = method == "rk4" ? dynamics::Method::rk4 : dynamics::Method::adaptive;
    if (dt > 0.0) opt.dt = dt;

    auto traj = dynamics::integrate(sys.hamiltonian.fn, sys.hamiltonian.label, x0, t_end, opt);
    write_file(out_path, report::render_trajectory_csv(traj));

    std::vector<verify::Labeled> watched{sys.hamiltonian};
    watched.insert(watched.end(), sys.conserved.begin(), sys.conserved.end());
    for (const auto& d : dynamics::drift_report(traj, watched))
        std::cout << "drift " << d.label << " " << d.max_drift << "\n";
    std::cout << "steps " << traj.times.size() - 1 << " out " << out_path << "\n";
    return 0;
}

int cmd_scan(const std::string& config_path, const std::string& param,
             const std::string& values_text, const std::string& out_path,
             const CommonOverrides& common) {
    config::SystemConfig cfg = config::load_config(config_path, common.max_n);
    common.apply(cfg);

    auto values = parse_csv_doubles(values_text, "--values");
    if (values.empty()) throw ConfigInvalid("--values: empty value list");

    const bool wants_z = param == "z";
    const bool wants_sigma = param == "sigma";
    if (!wants_z && !wants_sigma) throw ConfigInvalid("--param must be 'z' or 'sigma'");
    if (wants_sigma && cfg.family != config::Family::comodule)
        throw ConfigInvalid("--param sigma only applies to the comodule family");
    if (wants_z && (cfg.family == config::Family::sw || cfg.family == config::Family::comodule))
        throw ConfigInvalid("--param z does not apply to family '" +
                            config::family_name(cfg.family) + "'");

    auto base_sys = config::build_system(cfg);
    const verify::SweepOptions base_opt = driver::sweep_options(base_sys);

    std::vector<report::ScanRow> rows;
    for (double v : values) {
        config::SystemConfig at = cfg;
        if (wants_z)
            at.z = v;
        else
            at.sigma = v;
        warn_overflow_risk(at);
        auto sys = config::build_system(at);
        auto opt = driver::sweep_options(sys);

        report::ScanRow row;
        row.value = v;
        for (const auto& r : verify::check_conservation(sys.hamiltonian, sys.conserved, opt))
            row.max_scaled_residual = std::max(row.max_scaled_residual, r.max_scaled);
        auto rank = verify::independence_rank(sys.rank_set, sys.expected_rank, opt);
        row.median_rank = rank.median_rank;
        row.expected_rank = rank.expected_rank;

        // distance to the undeformed limit at the shared sample points
        for (const auto& spec : base_sys.limits) {
            const Observable probe = spec.quantity_at(v);
            const Observable* regs[] = {&spec.reference, &probe};
            auto points =
                verify::sample_points(spec.reference.arity(), base_opt.n_points, base_opt, regs);
            for (const auto& x : points)
                row.limit_diff =
                    std::max(row.limit_diff, std::abs(probe.eval(x) - spec.reference.eval(x)));
        }
        row.pass = row.max_scaled_residual <= opt.tol && rank.pass;
        rows.push_back(row);
    }

    const std::string rendered = report::render_scan_csv(param, rows);
    if (!out_path.empty())
        write_file(out_path, rendered);
    else
        std::cout << rendered;
    for (const auto& row : rows)
        if (!row.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"koalint: superintegrable oscillator families and their deformations — "
                 "closed-form conserved quantities, machine verification, dynamics"};
    app.require_subcommand(1);

    CommonOverrides common;

    std::string config_path, out_path;
    bool no_timestamp = false;

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite for a config");
    verify_cmd->add_option("config", config_path, "JSON system config")->required();
    verify_cmd->add_option("--out", out_path, "report file (default: stdout)");
    verify_cmd->add_flag("--no-timestamp", no_timestamp, "omit generated_at for byte-stable output");
    verify_cmd->add_option("--seed", common.seed, "override the config seed");
    verify_cmd->add_option("--points", common.points, "override the config sample count");
    verify_cmd->add_option("--tol", common.tol, "override the config tolerance");
    verify_cmd->add_option("--max-n", common.max_n, "particle-count cap (default 12)");

    double t_end = 10.0, dt = -1.0;
    std::string method = "adaptive", q0_text, p0_text;
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate Hamilton's equations");
    integrate_cmd->add_option("config", config_path, "JSON system config")->required();
    integrate_cmd->add_option("--t-end", t_end, "integration time")->required();
    integrate_cmd->add_option("--dt", dt, "rk4 step size");
    integrate_cmd->add_option("--method", method, "rk4 | adaptive")
        ->check(CLI::IsMember({"rk4", "adaptive"}));
    integrate_cmd->add_option("--out", out_path, "trajectory CSV path")->required();
    integrate_cmd->add_option("--q0", q0_text, "initial positions, comma separated");
    integrate_cmd->add_option("--p0", p0_text, "initial momenta, comma separated");
    integrate_cmd->add_option("--max-n", common.max_n, "particle-count cap (default 12)");

    std::string param, values_text;
    auto* scan_cmd = app.add_subcommand("scan", "sweep a deformation parameter");
    scan_cmd->add_option("config", config_path, "JSON system config")->required();
    scan_cmd->add_option("--param", param, "z | sigma")->required();
    scan_cmd->add_option("--values", values_text, "comma-separated parameter values")->required();
    scan_cmd->add_option("--out", out_path, "scan CSV path (default: stdout)");
    scan_cmd->add_option("--seed", common.seed, "override the config seed");
    scan_cmd->add_option("--points", common.points, "override the config sample count");
    scan_cmd->add_option("--tol", common.tol, "override the config tolerance");
    scan_cmd->add_option("--max-n", common.max_n, "particle-count cap (default 12)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) return cmd_verify(config_path, out_path, no_timestamp, common);
        if (integrate_cmd->parsed())
            return cmd_integrate(config_path, t_end, dt, method, out_path, q0_text, p0_text,
                                 common);
        if (scan_cmd->parsed()) return cmd_scan(config_path, param, values_text, out_path, common);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return to_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
