#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "platoonsim/certify.hpp"
#include "platoonsim/explore.hpp"
#include "platoonsim/presets.hpp"
#include "platoonsim/scenario_io.hpp"
#include "platoonsim/summary.hpp"
#include "platoonsim/trajectory_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace platoonsim;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;      // divergence, failed checks
constexpr int kExitBadInput = 2;     // parse/validation errors, unknown names
constexpr int kExitContradiction = 3;  // explore observed a theorem violation

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> horizon;
};

/// Overrides are applied to the raw JSON before parsing so that derived
/// quantities (e.g. seeds of randomized disturbances that omit their own)
/// pick them up exactly as if the file had been edited.
Scenario load_with_overrides(const fs::path& path, const RunOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open scenario file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError("", std::string("invalid JSON: ") + err.what());
    }
    if (overrides.seed) j["seed"] = *overrides.seed;
    if (overrides.dt) j["integration"]["dt"] = *overrides.dt;
    if (overrides.horizon) j["integration"]["horizon"] = *overrides.horizon;
    return scenario_from_json(j);
}

void print_bound_warnings(const Scenario& scenario) {
    for (const BoundWarning& w : scenario.bound_warnings()) {
        std::cerr << "warning: disturbance on edge (" << (w.j + 1) << ", " << (w.i + 1)
                  << ") has worst-case magnitude " << w.bound
                  << ", above the assumed bound w_bar = " << w.w_bar << "\n";
    }
}

int cmd_run(const fs::path& scenario_path, const fs::path& output_dir,
            const RunOverrides& overrides) {
    const Scenario scenario = load_with_overrides(scenario_path, overrides);
    print_bound_warnings(scenario);

    const SimulationResult result = run(scenario);

    fs::create_directories(output_dir);
    save_trajectory_csv(result.trajectory, output_dir / "trajectory.csv");
    write_run_summary(scenario, result, output_dir / "summary.txt");

    std::cout << "verdict: " << to_string(result.verdict.status) << "\n";
    for (const CheckEntry& entry : result.report.entries) {
        std::cout << (entry.pass ? "  pass  " : "  FAIL  ") << entry.name << "\n";
    }
    std::cout << "wrote " << (output_dir / "trajectory.csv").string() << " and "
              << (output_dir / "summary.txt").string() << "\n";
    return kExitOk;
}

int cmd_preset(const std::string& name, const std::optional<fs::path>& output, bool list) {
    if (list) {
        for (const std::string& preset : preset_names()) std::cout << preset << "\n";
        return kExitOk;
    }
    const Scenario scenario = make_preset(name);
    if (output) {
        save_scenario(scenario, *output);
        std::cout << "wrote " << output->string() << "\n";
    } else {
        std::cout << scenario_to_json(scenario).dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_certify(const fs::path& scenario_path, const fs::path& trajectory_path,
                const std::optional<fs::path>& output) {
    const Scenario scenario = load_with_overrides(scenario_path, {});
    const Trajectory trajectory = load_trajectory_csv(trajectory_path);
    if (trajectory.dim() != scenario.graph.size()) {
        throw ParseError("", "trajectory dimension does not match the scenario");
    }

    const Eigen::VectorXd p = scenario.reference_positions();
    const ConvergenceVerdict verdict =
        detect(trajectory, scenario.detection.window, scenario.detection.tol);
    const CertificationReport report = certify_trajectory(trajectory, scenario, p, verdict);

    std::string text = "verdict = " + std::string(to_string(verdict.status)) + "\n" +
                       certification_report_text(report);
    if (output) {
        std::ofstream out(*output);
        if (!out) throw Error("cannot write report file: " + output->string());
        out << text;
        std::cout << "wrote " << output->string() << "\n";
    }
    std::cout << text;
    return report.all_pass() ? kExitOk : kExitRuntime;
}

int cmd_explore(const std::string& family_name, int trials, std::uint64_t seed,
                const fs::path& output_dir, double horizon) {
    const MatrixFamily family = matrix_family_from_string(family_name);
    SearchOptions options;
    options.trials = trials;
    options.seed = seed;
    options.horizon = horizon;

    const SearchReport report = search_counterexample(family, options);

    fs::create_directories(output_dir);
    {
        std::ofstream out(output_dir / "report.txt");
        if (!out) throw Error("cannot write report file");
        out << search_report_text(report);
    }
    // Each interesting trial is written as a reproducible artifact: its
    // matrix, start point and policy as JSON plus the resynthesized
    // trajectory as CSV.
    for (std::size_t k = 0; k < report.interesting.size(); ++k) {
        const TrialRecord& r = report.interesting[k];
        nlohmann::json j;
        j["trial"] = r.index;
        j["outcome"] = to_string(r.outcome);
        j["policy"] = {{"kind", to_string(r.policy.kind)},
                       {"rate", r.policy.rate},
                       {"zero_probability", r.policy.zero_probability},
                       {"switch_interval", r.policy.switch_interval},
                       {"stall_time", r.policy.stall_time},
                       {"seed", r.policy.seed}};
        j["clusters"] = r.clusters;
        j["kernel_distance"] = r.limit_kernel_distance;
        j["max_norm"] = r.max_norm;
        std::vector<std::vector<double>> rows;
        for (Eigen::Index row = 0; row < r.a.rows(); ++row) {
            rows.emplace_back(r.a.row(row).begin(), r.a.row(row).end());
        }
        j["matrix"] = rows;
        j["x0"] = std::vector<double>(r.x0.begin(), r.x0.end());

        const std::string stem = "interesting_" + std::to_string(k + 1);
        std::ofstream out(output_dir / (stem + ".json"));
        if (!out) throw Error("cannot write trial file");
        out << j.dump(2) << "\n";
        save_trajectory_csv(synthesize(r.a, r.x0, r.policy, options.dt, options.horizon),
                            output_dir / (stem + ".csv"));
    }

    std::cout << search_report_text(report);
    std::cout << "wrote " << (output_dir / "report.txt").string() << "\n";
    return report.theorem_contradiction ? kExitContradiction : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deadzone-controlled platoon simulation and certification toolkit"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Integrate a scenario, detect convergence, certify");
    std::string run_scenario;
    std::string run_output = ".";
    RunOverrides overrides;
    run_cmd->add_option("scenario", run_scenario, "Scenario JSON file")->required();
    run_cmd->add_option("-o,--output", run_output, "Output directory (default .)");
    run_cmd->add_option("--seed", overrides.seed, "Override the scenario seed");
    run_cmd->add_option("--dt", overrides.dt, "Override the integration step");
    run_cmd->add_option("--horizon", overrides.horizon, "Override the integration horizon");

    // preset
    auto* preset_cmd = app.add_subcommand("preset", "Emit a built-in scenario as JSON");
    std::string preset_name;
    std::optional<std::string> preset_output;
    bool preset_list = false;
    preset_cmd->add_option("name", preset_name, "Preset name");
    preset_cmd->add_option("-o,--output", preset_output, "Write to a file instead of stdout");
    preset_cmd->add_flag("--list", preset_list, "List available presets");

    // certify
    auto* certify_cmd =
        app.add_subcommand("certify", "Re-check a recorded trajectory against a scenario");
    std::string certify_scenario;
    std::string certify_trajectory_path;
    std::optional<std::string> certify_output;
    certify_cmd->add_option("scenario", certify_scenario, "Scenario JSON file")->required();
    certify_cmd->add_option("trajectory", certify_trajectory_path, "Trajectory CSV file")
        ->required();
    certify_cmd->add_option("-o,--output", certify_output, "Also write the report to a file");

    // explore
    auto* explore_cmd = app.add_subcommand(
        "explore", "Random search for counterexamples over a matrix family");
    std::string family = "psd-zero-free-kernel";
    int trials = 100;
    std::uint64_t explore_seed = 0;
    double explore_horizon = 240.0;
    std::string explore_output = ".";
    explore_cmd->add_option("family", family,
                            "positive-definite | psd-zero-free-kernel | psd-kernel-with-zeros");
    explore_cmd->add_option("--trials", trials, "Number of random trials (default 100)");
    explore_cmd->add_option("--seed", explore_seed, "Search seed");
    explore_cmd->add_option("--horizon", explore_horizon, "Synthesis horizon per trial");
    explore_cmd->add_option("-o,--output", explore_output, "Output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_scenario, run_output, overrides);
        if (preset_cmd->parsed()) {
            if (!preset_list && preset_name.empty()) {
                std::cerr << "error: preset needs a name (or --list)\n";
                return kExitBadInput;
            }
            std::optional<fs::path> out;
            if (preset_output) out = *preset_output;
            return cmd_preset(preset_name, out, preset_list);
        }
        if (certify_cmd->parsed()) {
            std::optional<fs::path> out;
            if (certify_output) out = *certify_output;
            return cmd_certify(certify_scenario, certify_trajectory_path, out);
        }
        if (explore_cmd->parsed()) {
            return cmd_explore(family, trials, explore_seed, explore_output, explore_horizon);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const NotRealizableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const DivergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitBadInput;
}
