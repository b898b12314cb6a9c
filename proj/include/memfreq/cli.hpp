#ifndef MEMFREQ_CLI_HPP
#define MEMFREQ_CLI_HPP

// Command-line front end: fit | eval | optimize | plan | sweep | simulate | surface.
//
// Exit status: 0 on success, 1 on usage or validation errors, 2 when the
// command ran but none of its results meets the deadline.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "errors.hpp"
#include "fitting.hpp"
#include "io/config.hpp"
#include "io/measurements.hpp"
#include "io/surface.hpp"
#include "io/table.hpp"
#include "offload.hpp"
#include "policy.hpp"

#ifndef MEMFREQ_FIXTURE_PATH
#define MEMFREQ_FIXTURE_PATH "data/fixture.json"
#endif

namespace memfreq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Environment variable that relocates relative --output paths.
inline constexpr const char* kOutputDirEnv = "MEMFREQ_OUTPUT_DIR";

inline std::string resolve_config_path(const std::string& arg) {
    return arg == "fixture" ? std::string(MEMFREQ_FIXTURE_PATH) : arg;
}

inline std::filesystem::path resolve_output_path(const std::string& arg) {
    std::filesystem::path p(arg);
    if (p.is_relative())
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
    return p;
}

namespace detail {

inline std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto t = io::detail::trim(tok);
        if (t.empty()) continue;
        out.push_back(io::detail::parse_double(t, 0, "deadlines"));
    }
    if (out.empty()) throw ValidationError("deadlines", "empty list");
    return out;
}

inline io::FleetEntry parse_member(const std::string& spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
    if (b == std::string::npos) throw ValidationError("member", "expected device:dnn:scenario, got '" + spec + "'");
    return {spec.substr(0, a), spec.substr(a + 1, b - a - 1), spec.substr(b + 1)};
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline void add_decision_row(io::Table& t, std::vector<std::string> prefix, const OffloadDecision& d,
                             io::Format fmt) {
    const auto num = [&](double v) { return io::format_number(v, fmt); };
    prefix.insert(prefix.end(), {d.x ? "offload" : "local", std::to_string(d.x), d.x ? "" : num(d.chosen_f.mem),
                                 d.x ? "" : num(d.chosen_f.com), num(d.total_latency), num(d.total_energy),
                                 num(d.offload_latency), num(d.offload_energy), num(d.local.energy),
                                 yes_no(d.feasible)});
    t.add(std::move(prefix));
}

inline const std::vector<std::string> kDecisionColumns = {
    "decision",          "x",                 "f_mem_ghz",      "f_com_ghz", "total_latency_s", "total_energy_j",
    "offload_latency_s", "offload_energy_j", "local_energy_j", "feasible"};

} // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Latency/power/energy models and frequency-scaling optimizer for DNN inference", "memfreq"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_arg = "fixture";
    std::string format_arg = "text";
    std::string output_arg;
    app.add_option("--config", config_arg, "Config file (JSON); 'fixture' selects the bundled one");
    app.add_option("--format", format_arg, "Output format")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--output", output_arg, "Write the report here instead of stdout (relative to $" +
                                               std::string(kOutputDirEnv) + " when set)");

    std::string device, dnn, scenario_name, input, quantity = "energy", deadlines_arg;
    double fmem = 0.0, fcom = 0.0, deadline = 0.0, flops = 0.0, flops_per_cycle = 0.0;
    std::size_t resolution = 50;
    std::vector<std::string> members;

    auto* fit = app.add_subcommand("fit", "Fit a latency or power model to a measurement CSV");
    fit->add_option("--input", input, "Measurement CSV")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate latency, power and energy at one frequency pair");
    auto* optimize = app.add_subcommand("optimize", "Compare the three frequency-scaling policies");
    auto* plan = app.add_subcommand("plan", "Decide between local inference and offloading");
    auto* sweep = app.add_subcommand("sweep", "Offloading decisions over a list of deadlines");
    auto* simulate = app.add_subcommand("simulate", "Plan every device of a fleet");
    auto* surface = app.add_subcommand("surface", "Emit a latency or energy surface as CSV");

    for (auto* sub : {eval, optimize, plan, sweep, surface}) {
        sub->add_option("--device", device, "Device name")->required();
        sub->add_option("--dnn", dnn, "DNN name")->required();
    }
    eval->add_option("--fmem", fmem, "Memory frequency, GHz")->required();
    eval->add_option("--fcom", fcom, "Computing frequency, GHz")->required();
    eval->add_option("--flops", flops, "Workload in FLOPs, for the FLOP-count baseline");
    eval->add_option("--flops-per-cycle", flops_per_cycle, "FLOPs per cycle, for the FLOP-count baseline");
    optimize->add_option("--deadline", deadline, "Deadline, s")->required();
    plan->add_option("--scenario", scenario_name, "Scenario name")->required();
    plan->add_option("--deadline", deadline, "Override the scenario deadline, s");
    sweep->add_option("--scenario", scenario_name, "Scenario name")->required();
    sweep->add_option("--deadlines", deadlines_arg, "Comma-separated ascending deadlines, s")->required();
    simulate->add_option("--member", members, "device:dnn:scenario (repeatable; default: the config's fleet)");
    surface->add_option("--quantity", quantity, "latency or energy")->check(CLI::IsMember({"latency", "energy"}));
    surface->add_option("--resolution", resolution, "Points per axis (>= 2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }

    const io::Format fmt = format_arg == "csv" ? io::Format::Csv : io::Format::Text;
    const auto num = [&](double v) { return io::format_number(v, fmt); };
    std::ostringstream report;
    int status = kExitOk;

    try {
        if (fit->parsed()) {
            const auto m = io::load_measurements(input);
            if (m.kind == io::MeasurementKind::Latency) {
                const auto r = fit_latency_model(m.latency);
                io::Table t({"kind", "lambda", "beta", "mu", "gamma", "r_squared", "mse", "n_samples", "degenerate"});
                t.add({"latency", num(r.model.lambda()), num(r.model.beta()), num(r.model.mu()), num(r.model.gamma()),
                       num(r.quality.r_squared), num(r.quality.mse), std::to_string(r.quality.n_samples),
                       detail::yes_no(r.degenerate)});
                t.write(report, fmt);
            } else {
                const auto r = fit_power_model(m.power);
                io::Table t({"kind", "kappa_mem", "kappa_com", "sigma", "r_squared", "correlation", "mse", "n_samples",
                             "degenerate"});
                t.add({"power", num(r.model.kappa_mem()), num(r.model.kappa_com()), num(r.model.sigma()),
                       num(r.quality.r_squared), num(std::sqrt(std::max(0.0, r.quality.r_squared))),
                       num(r.quality.mse), std::to_string(r.quality.n_samples), detail::yes_no(r.degenerate)});
                t.write(report, fmt);
            }
        } else {
            const auto cfg = io::load_config(resolve_config_path(config_arg));

            if (eval->parsed()) {
                const auto& dev = cfg.device(device);
                const auto& lat = dev.model(dnn);
                const FrequencyPair f{fmem, fcom};
                std::vector<std::string> header{"f_mem_ghz", "f_com_ghz", "latency_s"};
                std::vector<std::string> row{num(fmem), num(fcom), num(eval_latency(lat, f))};
                if (dev.power) {
                    header.insert(header.end(), {"power_w", "energy_j"});
                    row.insert(row.end(), {num(eval_power(*dev.power, f)), num(eval_energy(lat, *dev.power, f))});
                }
                if (flops > 0.0 || flops_per_cycle > 0.0) {
                    header.push_back("baseline_latency_s");
                    row.push_back(num(eval_baseline_latency(WorkloadModel(flops, flops_per_cycle), fcom)));
                }
                io::Table t(header);
                t.add(row);
                t.write(report, fmt);
            } else if (optimize->parsed()) {
                const auto& dev = cfg.device(device);
                const auto results = compare_policies(dev.model(dnn), dev.require_power(), dev.domain, deadline);
                io::Table t({"policy", "f_mem_ghz", "f_com_ghz", "latency_s", "power_w", "energy_j", "feasible",
                             "min_achievable_latency_s"});
                bool any = false;
                for (const auto& r : results) {
                    any = any || r.feasible;
                    t.add({std::string(to_string(r.policy)), num(r.f.mem), num(r.f.com), num(r.latency), num(r.power),
                           num(r.energy), detail::yes_no(r.feasible), num(r.min_achievable_latency)});
                }
                t.write(report, fmt);
                if (!any) status = kExitInfeasible;
            } else if (plan->parsed() || sweep->parsed()) {
                const auto& dev = cfg.device(device);
                Scenario s = cfg.scenario(scenario_name);
                if (plan->parsed() && plan->count("--deadline")) s.deadline = deadline;
                const auto ds = plan->parsed() ? std::vector<double>{s.deadline} : detail::parse_list(deadlines_arg);
                const auto table = sweep_deadline(dev.model(dnn), dev.require_power(), dev.domain, s, ds);
                std::vector<std::string> header{"deadline_s"};
                header.insert(header.end(), detail::kDecisionColumns.begin(), detail::kDecisionColumns.end());
                io::Table t(header);
                bool any = false;
                for (std::size_t i = 0; i < table.size(); ++i) {
                    any = any || table[i].feasible;
                    detail::add_decision_row(t, {num(ds[i])}, table[i], fmt);
                }
                t.write(report, fmt);
                if (!any) status = kExitInfeasible;
            } else if (simulate->parsed()) {
                std::vector<io::FleetEntry> entries;
                for (const auto& m : members) entries.push_back(detail::parse_member(m));
                if (entries.empty()) entries = cfg.fleet;
                const auto result = simulate_fleet(cfg.build_fleet(entries));
                std::vector<std::string> header{"device", "dnn", "scenario"};
                header.insert(header.end(), detail::kDecisionColumns.begin(), detail::kDecisionColumns.end());
                io::Table t(header);
                for (std::size_t i = 0; i < entries.size(); ++i)
                    detail::add_decision_row(t, {entries[i].device, entries[i].dnn, entries[i].scenario},
                                             result.decisions[i], fmt);
                t.add({"total", "", "", "", "", "", "", "", num(result.total_energy), "", "", "",
                       std::to_string(result.feasible_count) + "/" + std::to_string(entries.size())});
                t.write(report, fmt);
                if (result.feasible_count == 0) status = kExitInfeasible;
            } else if (surface->parsed()) {
                const auto& dev = cfg.device(device);
                const auto q = quantity == "latency" ? io::SurfaceQuantity::Latency : io::SurfaceQuantity::Energy;
                if (q == io::SurfaceQuantity::Energy) dev.require_power();
                io::write_surface_csv(io::emit_surface(q, dev.model(dnn), dev.power, dev.domain, resolution), report);
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    if (output_arg.empty()) {
        out << report.str();
    } else {
        const auto path = resolve_output_path(output_arg);
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << path.string() << "'\n";
            return kExitError;
        }
        file << report.str();
    }
    return status;
}

} // namespace memfreq::cli

#endif // MEMFREQ_CLI_HPP
