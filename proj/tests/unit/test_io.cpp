#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "platoonsim/certify.hpp"
#include "platoonsim/explore.hpp"
#include "platoonsim/presets.hpp"
#include "platoonsim/rng.hpp"
#include "platoonsim/scenario_io.hpp"
#include "platoonsim/simulate.hpp"
#include "platoonsim/summary.hpp"
#include "platoonsim/trajectory_io.hpp"

using namespace platoonsim;
using nlohmann::json;

namespace {

// Two samples, two agents, with controls; every value has a short exact
// decimal form so the expected CSV bytes can be written down literally.
Trajectory tiny_trajectory(bool with_controls = true) {
    Trajectory traj;
    traj.times = {0.0, 0.5};
    Eigen::VectorXd x0(2), x1(2);
    x0 << 0.0, 1.5;
    x1 << 0.25, -1.25;
    traj.states = {x0, x1};
    if (with_controls) {
        Eigen::VectorXd u0(2), u1(2);
        u0 << 0.5, -0.5;
        u1 << 0.0, 0.0;
        traj.controls = {u0, u1};
    }
    traj.energy = {1.0, 0.5};
    return traj;
}

Trajectory parse_csv(const std::string& text) {
    std::istringstream is(text);
    return read_trajectory_csv(is);
}

// Field path carried by the ParseError that scenario_from_json raises,
// or a sentinel when no error is raised at all.
std::string rejected_field(const json& j) {
    try {
        (void)scenario_from_json(j);
    } catch (const ParseError& e) {
        return e.field;
    }
    return "<accepted>";
}

// Minimal scenario document that parses cleanly; error-path subcases
// start from this and break one field at a time.
json minimal_scenario_json() {
    return json::parse(R"({
        "graph": {"type": "chain", "n": 2},
        "offsets": [[2, 1, 1.0]],
        "x0": [0.0, 1.0],
        "controller": {"kind": "proportional", "gain": 1.0, "w_bar": 0.0},
        "integration": {"dt": 0.001, "horizon": 1.0},
        "detection": {"window": 0.5, "tol": 0.001},
        "seed": 0
    })");
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("trajectory csv") {

TEST_CASE("the writer emits the documented column layout byte for byte") {
    SUBCASE("with control columns") {
        const std::string expected =
            "t,x_1,x_2,u_1,u_2,V\n"
            "0,0,1.5,0.5,-0.5,1\n"
            "0.5,0.25,-1.25,0,0,0.5\n";
        CHECK(trajectory_csv(tiny_trajectory()) == expected);
    }
    SUBCASE("without control columns") {
        const std::string expected =
            "t,x_1,x_2,V\n"
            "0,0,1.5,1\n"
            "0.5,0.25,-1.25,0.5\n";
        CHECK(trajectory_csv(tiny_trajectory(false)) == expected);
    }
}

TEST_CASE("writing then reading recovers every sample exactly") {
    const Trajectory original = tiny_trajectory();
    const Trajectory back = parse_csv(trajectory_csv(original));

    REQUIRE(back.samples() == 2);
    REQUIRE(back.dim() == 2);
    REQUIRE(back.has_controls());
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(back.times[k] == original.times[k]);
        CHECK(back.energy[k] == original.energy[k]);
        for (int i = 0; i < 2; ++i) {
            CHECK(back.states[k][i] == original.states[k][i]);
            CHECK(back.controls[k][i] == original.controls[k][i]);
        }
    }

    const Trajectory no_controls = parse_csv(trajectory_csv(tiny_trajectory(false)));
    CHECK_FALSE(no_controls.has_controls());
    CHECK(no_controls.dim() == 2);
    CHECK(no_controls.samples() == 2);
}

TEST_CASE("write-read-write is idempotent on a simulated trajectory") {
    // The 9-significant-digit cells are lossy against full doubles, but a
    // second pass through the format must reproduce the first byte for
    // byte: 9-digit decimals survive a decimal -> double -> decimal trip.
    Scenario scenario = preset_two_agent_drift();
    scenario.integration.horizon = 0.5;
    scenario.detection.window = 0.25;

    const std::string first = trajectory_csv(integrate(scenario));
    const std::string second = trajectory_csv(parse_csv(first));
    CHECK(second == first);
}

TEST_CASE("blank lines are skipped and row order is preserved") {
    const Trajectory traj = parse_csv("t,x_1,V\n\n0,1,2\n\n0.5,1.5,2.5\n\n");
    REQUIRE(traj.samples() == 2);
    CHECK(traj.times[1] == 0.5);
    CHECK(traj.states[1][0] == 1.5);
    CHECK(traj.energy[1] == 2.5);
    CHECK_FALSE(traj.has_controls());
}

TEST_CASE("malformed trajectory files are rejected with located errors") {
    auto field_of = [](const std::string& text) -> std::string {
        try {
            (void)parse_csv(text);
        } catch (const ParseError& e) {
            return e.field;
        }
        return "<accepted>";
    };

    SUBCASE("empty input") { CHECK(field_of("") == "line 1"); }
    SUBCASE("header but no samples") { CHECK(field_of("t,x_1,V\n") == "line 2"); }
    SUBCASE("header not starting with t") { CHECK(field_of("time,x_1,V\n0,1,2\n") == "line 1"); }
    SUBCASE("header not ending with V") { CHECK(field_of("t,x_1,x_2\n0,1,2\n") == "line 1"); }
    SUBCASE("no state columns") { CHECK(field_of("t,u_1,V\n0,1,2\n") == "line 1"); }
    SUBCASE("control block shorter than the state block") {
        CHECK(field_of("t,x_1,x_2,u_1,V\n0,1,2,3,4\n") == "line 1");
    }
    SUBCASE("unknown column between states and V") {
        CHECK(field_of("t,x_1,junk,V\n0,1,2,3\n") == "line 1");
    }
    SUBCASE("row with too few cells") { CHECK(field_of("t,x_1,V\n0,1,2\n0,1\n") == "line 3"); }
    SUBCASE("row with too many cells") { CHECK(field_of("t,x_1,V\n0,1,2,3\n") == "line 2"); }
    SUBCASE("non-numeric cell names line and column") {
        CHECK(field_of("t,x_1,V\n0,abc,2\n") == "line 2, column 2");
    }
    SUBCASE("trailing garbage after a number") {
        CHECK(field_of("t,x_1,V\n0,1,2\n0.5x,1,2\n") == "line 3, column 1");
    }
}

TEST_CASE("a full preset run writes one row per sample plus the header") {
    const Trajectory traj = integrate(preset_two_agent_drift());
    REQUIRE(traj.samples() == 10001);

    const std::string csv = trajectory_csv(traj);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10002);
    CHECK(csv.rfind("t,x_1,x_2,u_1,u_2,V\n", 0) == 0);

    const auto path = temp_file("platoonsim-io-drift.csv");
    save_trajectory_csv(traj, path);
    const Trajectory loaded = load_trajectory_csv(path);
    CHECK(loaded.samples() == 10001);
    CHECK(loaded.dim() == 2);
    CHECK(loaded.has_controls());
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_trajectory_csv(temp_file("platoonsim-io-missing.csv")), ParseError);
}

}  // TEST_SUITE("trajectory csv")

TEST_SUITE("scenario json") {

TEST_CASE("every disturbance kind and a weighted graph survive a round trip") {
    SensingGraph graph(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {0, 3, 1.5}});
    DesiredOffsets offsets(graph);
    offsets.set(1, 0, 1.0);
    offsets.set(2, 1, 1.0);
    offsets.set(3, 2, 1.0);
    offsets.set(3, 0, 3.0);
    Eigen::VectorXd x0(4);
    x0 << 0.0, 0.9, 2.1, 3.2;

    EdgeDisturbanceMap disturbances;
    disturbances.set(1, 0, DisturbanceSpec::zero());
    disturbances.set(0, 1, DisturbanceSpec::constant(-0.25));
    disturbances.set(2, 1, DisturbanceSpec::pulse({0.1, 0.01, 2.0, 1.0, 0.5}));
    disturbances.set(3, 2, DisturbanceSpec::uniform_random(0.05, 42, 0.5));

    ControllerSpec controller;
    controller.kind = ControllerKind::NodeDeadzone;
    controller.gain = 2.0;
    controller.w_bar = 0.05;
    controller.threshold = {ThresholdKind::Ramp, 0.05, 0.01};

    Scenario scenario{std::move(graph), std::move(offsets),       std::move(x0),
                      disturbances,     controller,               {1e-3, 5.0},
                      {2.0, 1e-3},      7};
    scenario.validate();

    const json j = scenario_to_json(scenario);

    // A graph with non-unit weights must spell out its edge list, with
    // 1-based labels in normalized sorted order.
    CHECK(j["graph"]["type"] == "edges");
    CHECK(j["graph"]["n"] == 4);
    REQUIRE(j["graph"]["edges"].size() == 4);
    CHECK(j["graph"]["edges"][1][0] == 1);
    CHECK(j["graph"]["edges"][1][1] == 4);
    CHECK(j["graph"]["edges"][1][2] == 1.5);

    CHECK(j["x0"].size() == 4);
    CHECK(j["seed"] == 7);
    CHECK(j["controller"]["kind"] == "node-deadzone");
    CHECK(j["controller"]["threshold"]["kind"] == "ramp");

    // Disturbance entries come out keyed by (observed, observer) pairs in
    // ascending order; the explicit random seed is preserved.
    REQUIRE(j["disturbances"].size() == 4);
    CHECK(j["disturbances"][0]["kind"] == "constant");
    CHECK(j["disturbances"][1]["kind"] == "zero");
    CHECK(j["disturbances"][2]["kind"] == "pulse");
    CHECK(j["disturbances"][3]["kind"] == "uniform_random");
    CHECK(j["disturbances"][3]["seed"] == 42);
    CHECK(j["disturbances"][2]["phase_delay"] == 0.5);

    const Scenario back = scenario_from_json(j);
    CHECK(canonical_scenario_string(back) == canonical_scenario_string(scenario));
    CHECK(scenario_hash(back) == scenario_hash(scenario));

    // The canonical form is a single sorted-key JSON document.
    const std::string canonical = canonical_scenario_string(scenario);
    CHECK(canonical.rfind("{\"controller\":", 0) == 0);

    const auto path = temp_file("platoonsim-io-scenario.json");
    save_scenario(scenario, path);
    const Scenario loaded = load_scenario(path);
    CHECK(canonical_scenario_string(loaded) == canonical);
    std::filesystem::remove(path);
}

TEST_CASE("unit-weight chains serialize in the compact chain form") {
    const json j = scenario_to_json(preset_converging_platoon());
    CHECK(j["graph"]["type"] == "chain");
    CHECK(j["graph"]["n"] == 6);
    CHECK_FALSE(j["graph"].contains("edges"));

    for (const std::string& name : preset_names()) {
        const Scenario preset = make_preset(name);
        const Scenario back = scenario_from_json(scenario_to_json(preset));
        CHECK(canonical_scenario_string(back) == canonical_scenario_string(preset));
        CHECK(scenario_hash(back) == scenario_hash(preset));
    }
}

TEST_CASE("a missing random seed is derived from the scenario seed and the edge") {
    json j = minimal_scenario_json();
    j["seed"] = 7;
    j["controller"] = {{"kind", "node-deadzone"},
                       {"gain", 1.0},
                       {"w_bar", 0.05},
                       {"threshold", {{"kind", "hard"}, {"w", 0.05}}}};
    j["disturbances"] = json::array(
        {{{"edge", {2, 1}}, {"kind", "uniform_random"}, {"amplitude", 0.05}, {"hold_time", 0.5}}});

    const Scenario parsed = scenario_from_json(j);
    const std::uint64_t expected = mix_seed(mix_seed(7, 1), 0);
    CHECK(parsed.disturbances.get(1, 0).seed() == expected);

    // Reserialization pins the derived seed explicitly, so the document
    // hash no longer depends on the derivation rule.
    const json out = scenario_to_json(parsed);
    REQUIRE(out["disturbances"].size() == 1);
    CHECK(out["disturbances"][0]["seed"] == expected);
    CHECK(scenario_hash(scenario_from_json(out)) == scenario_hash(parsed));

    // Parsing the seedless document twice lands on the same scenario.
    CHECK(scenario_hash(scenario_from_json(j)) == scenario_hash(parsed));

    // A different scenario seed yields a different derived seed.
    json other = j;
    other["seed"] = 8;
    CHECK(scenario_from_json(other).disturbances.get(1, 0).seed() ==
          mix_seed(mix_seed(8, 1), 0));
    CHECK(scenario_from_json(other).disturbances.get(1, 0).seed() != expected);
}

TEST_CASE("the document hash tracks every field") {
    json j = minimal_scenario_json();
    const std::uint64_t base_hash = scenario_hash(scenario_from_json(j));

    json bumped_seed = j;
    bumped_seed["seed"] = 1;
    CHECK(scenario_hash(scenario_from_json(bumped_seed)) != base_hash);

    json bumped_gain = j;
    bumped_gain["controller"]["gain"] = 1.5;
    CHECK(scenario_hash(scenario_from_json(bumped_gain)) != base_hash);

    CHECK(scenario_hash(scenario_from_json(j)) == base_hash);
}

TEST_CASE("parse failures carry dotted field paths") {
    CHECK_NOTHROW((void)scenario_from_json(minimal_scenario_json()));

    SUBCASE("top-level document must be an object") {
        CHECK_THROWS_AS((void)scenario_from_json(json::array()), ParseError);
    }
    SUBCASE("missing required sections") {
        for (const char* key : {"graph", "offsets", "x0", "controller"}) {
            json j = minimal_scenario_json();
            j.erase(key);
            CHECK(rejected_field(j).find(key) != std::string::npos);
        }
    }
    SUBCASE("unknown graph type") {
        json j = minimal_scenario_json();
        j["graph"]["type"] = "ring";
        CHECK(rejected_field(j) == "graph.type");
    }
    SUBCASE("chain with a single agent") {
        json j = minimal_scenario_json();
        j["graph"]["n"] = 1;
        CHECK(rejected_field(j) == "graph.n");
    }
    SUBCASE("self loop in an explicit edge list") {
        json j = minimal_scenario_json();
        j["graph"] = {{"type", "edges"}, {"n", 2}, {"edges", {{1, 1}}}};
        CHECK(rejected_field(j) == "graph.edges");
    }
    SUBCASE("agent label out of range") {
        json j = minimal_scenario_json();
        j["offsets"] = {{5, 1, 0.5}};
        CHECK(rejected_field(j) == "offsets[0][0]");
    }
    SUBCASE("offset entry with the wrong arity") {
        json j = minimal_scenario_json();
        j["offsets"] = {{2, 1}};
        CHECK(rejected_field(j) == "offsets[0]");
    }
    SUBCASE("offset on a missing edge") {
        json j = minimal_scenario_json();
        j["graph"] = {{"type", "chain"}, {"n", 3}};
        j["x0"] = {0.0, 1.0, 2.0};
        j["offsets"] = {{3, 1, 0.5}};
        CHECK(rejected_field(j) == "offsets[0]");
    }
    SUBCASE("missing controller gain") {
        json j = minimal_scenario_json();
        j["controller"].erase("gain");
        CHECK(rejected_field(j) == "controller.gain");
    }
    SUBCASE("deadzone controller without a threshold") {
        json j = minimal_scenario_json();
        j["controller"]["kind"] = "node-deadzone";
        CHECK(rejected_field(j) == "controller.threshold");
    }
    SUBCASE("unknown disturbance kind") {
        json j = minimal_scenario_json();
        j["disturbances"] = json::array({{{"edge", {2, 1}}, {"kind", "sawtooth"}}});
        CHECK(rejected_field(j) == "disturbances[0].kind");
    }
    SUBCASE("disturbance on a missing edge") {
        json j = minimal_scenario_json();
        j["graph"] = {{"type", "chain"}, {"n", 3}};
        j["x0"] = {0.0, 1.0, 2.0};
        j["disturbances"] = json::array({{{"edge", {1, 3}}, {"kind", "zero"}}});
        CHECK(rejected_field(j) == "disturbances");
    }
    SUBCASE("initial state with the wrong dimension") {
        json j = minimal_scenario_json();
        j["x0"] = {0.0, 1.0, 2.0};
        CHECK(rejected_field(j) == "x0");
    }
    SUBCASE("non-numeric initial state entry") {
        json j = minimal_scenario_json();
        j["x0"] = {0.0, "far away"};
        CHECK(rejected_field(j) == "x0[1]");
    }
    SUBCASE("detection window longer than the horizon") {
        json j = minimal_scenario_json();
        j["detection"]["window"] = 5.0;
        CHECK(rejected_field(j) == "detection.window");
    }
    SUBCASE("negative seed") {
        json j = minimal_scenario_json();
        j["seed"] = -5;
        CHECK(rejected_field(j) == "seed");
    }
}

TEST_CASE("inconsistent offset cycles parse but admit no reference positions") {
    json j = minimal_scenario_json();
    j["graph"] = {{"type", "edges"}, {"n", 3}, {"edges", {{1, 2}, {2, 3}, {1, 3}}}};
    j["x0"] = {0.0, 1.0, 2.0};
    // Around the triangle the desired offsets sum to 1, not 0, so no
    // position assignment satisfies all three.
    j["offsets"] = {{2, 1, 1.0}, {3, 2, 1.0}, {3, 1, 1.0}};

    const Scenario scenario = scenario_from_json(j);
    CHECK(scenario.graph.weight(0, 1) == 1.0);  // two-element edges default to weight 1

    CHECK_THROWS_AS((void)scenario.reference_positions(), NotRealizableError);
    try {
        (void)scenario.reference_positions();
    } catch (const NotRealizableError& e) {
        CHECK(e.residual == doctest::Approx(1.0));
        CHECK(e.edge_i != e.edge_j);
    }
}

TEST_CASE("scenario files that are not JSON are rejected") {
    CHECK_THROWS_AS((void)load_scenario(temp_file("platoonsim-io-missing.json")), ParseError);

    const auto path = temp_file("platoonsim-io-garbage.json");
    {
        std::ofstream out(path);
        out << "not json {{{";
    }
    try {
        (void)load_scenario(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("invalid JSON") != std::string::npos);
    }
    std::filesystem::remove(path);
}

}  // TEST_SUITE("scenario json")

TEST_SUITE("summary text") {

TEST_CASE("a run summary lists the scenario fingerprint, verdict and checks") {
    const Scenario scenario = preset_two_agent_drift();
    const SimulationResult result = run(scenario);
    const std::string text = run_summary_text(scenario, result);

    CHECK(text.rfind("format = platoonsim-run-summary-v1\n", 0) == 0);

    char hash_line[40];
    std::snprintf(hash_line, sizeof(hash_line), "scenario_hash = 0x%016llx\n",
                  static_cast<unsigned long long>(scenario_hash(scenario)));
    CHECK(text.find(hash_line) != std::string::npos);

    CHECK(text.find("agents = 2\n") != std::string::npos);
    CHECK(text.find("graph = chain\n") != std::string::npos);
    CHECK(text.find("controller = proportional\n") != std::string::npos);
    CHECK(text.find("threshold = hard\n") != std::string::npos);
    CHECK(text.find("gain = 1\n") != std::string::npos);
    CHECK(text.find("dt = 0.001\n") != std::string::npos);
    CHECK(text.find("samples = 10001\n") != std::string::npos);

    // The biased pair drifts forever, so no limit point is reported and
    // the two convergence-only checks are not run.
    CHECK(text.find("verdict = undecided\n") != std::string::npos);
    CHECK(text.find("x_star") == std::string::npos);
    CHECK(text.find("reference = 0 1\n") != std::string::npos);
    CHECK(text.find("tail_variation = ") != std::string::npos);
    CHECK(text.find("final_energy = ") != std::string::npos);
    CHECK(text.find("checks = 4\n") != std::string::npos);
    CHECK(text.find("check.sign-condition.pass = ") != std::string::npos);
    CHECK(text.find("check.energy-monotone.pass = ") != std::string::npos);
    CHECK(text.find("check.minmax-monotone.pass = ") != std::string::npos);
    CHECK(text.find("check.hull-containment.pass = ") != std::string::npos);
    CHECK(text.find("check.residual-bounds") == std::string::npos);
    CHECK(text.find("check.chain-bounds") == std::string::npos);
    CHECK(text.find("all_checks_pass = ") != std::string::npos);

    // The constant bias 0.01 sits exactly at the assumed bound, which is
    // allowed; only a strict excess warns.
    CHECK(text.find("warnings = 0\n") != std::string::npos);

    const auto path = temp_file("platoonsim-io-summary.txt");
    write_run_summary(scenario, result, path);
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == text);
    std::filesystem::remove(path);
}

TEST_CASE("a converged run reports its limit and all six checks") {
    const Scenario scenario = preset_converging_platoon();
    const std::string text = run_summary_text(scenario, run(scenario));
    CHECK(text.find("verdict = converged\n") != std::string::npos);
    CHECK(text.find("x_star = ") != std::string::npos);
    CHECK(text.find("checks = 6\n") != std::string::npos);
    CHECK(text.find("check.residual-bounds.pass = true\n") != std::string::npos);
    CHECK(text.find("check.chain-bounds.pass = true\n") != std::string::npos);
    CHECK(text.find("all_checks_pass = true\n") != std::string::npos);
    CHECK(text.find("warnings = 4\n") != std::string::npos);
    CHECK(text.find("exceeding w_bar 0.1\n") != std::string::npos);
}

TEST_CASE("certification reports print one block per check") {
    CertificationReport report;
    report.entries.push_back({"alpha", true, -0.5, 0.001, 0.0, -1, ""});
    report.entries.push_back({"beta", false, 0.25, 0.0, 1.5, 2, "forward differences"});

    const std::string expected =
        "checks = 2\n"
        "check.alpha.pass = true\n"
        "check.alpha.margin = -0.5\n"
        "check.alpha.tolerance = 0.001\n"
        "check.alpha.worst_time = 0\n"
        "check.beta.pass = false\n"
        "check.beta.margin = 0.25\n"
        "check.beta.tolerance = 0\n"
        "check.beta.worst_time = 1.5\n"
        "check.beta.worst_agent = 3\n"
        "check.beta.note = forward differences\n"
        "all_checks_pass = false\n";
    CHECK(certification_report_text(report) == expected);
}

TEST_CASE("search reports tally outcomes and list interesting trials") {
    SearchReport report;
    report.family = MatrixFamily::PsdZeroFreeKernel;
    report.trials = 5;
    report.tally[TrialOutcome::ConvergedInKernel] = 4;
    report.tally[TrialOutcome::Undecided] = 1;

    TrialRecord record;
    record.index = 3;
    record.policy.kind = SynthesisPolicy::Kind::AxisSwitching;
    record.a = Eigen::MatrixXd::Identity(2, 2);
    record.x0 = Eigen::VectorXd::Zero(2);
    record.outcome = TrialOutcome::MultiCluster;
    record.limit_kernel_distance = 0.5;
    record.clusters = 2;
    record.max_norm = 1.25;
    report.interesting.push_back(record);

    const std::string expected =
        "format = platoonsim-search-report-v1\n"
        "family = psd-zero-free-kernel\n"
        "trials = 5\n"
        "outcome.converged-in-kernel = 4\n"
        "outcome.undecided = 1\n"
        "contradiction = false\n"
        "interesting = 1\n"
        "interesting.1.trial = 3\n"
        "interesting.1.outcome = multi-cluster\n"
        "interesting.1.policy = axis-switching\n"
        "interesting.1.dim = 2\n"
        "interesting.1.clusters = 2\n"
        "interesting.1.kernel_distance = 0.5\n"
        "interesting.1.max_norm = 1.25\n";
    CHECK(search_report_text(report) == expected);

    report.theorem_contradiction = true;
    report.contradiction_detail = "trial 3 kept alternating";
    const std::string flagged = search_report_text(report);
    CHECK(flagged.find("contradiction = true\n") != std::string::npos);
    CHECK(flagged.find("contradiction_detail = trial 3 kept alternating\n") !=
          std::string::npos);
}

}  // TEST_SUITE("summary text")
