#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "platoonsim/certify.hpp"
#include "platoonsim/presets.hpp"
#include "platoonsim/rng.hpp"

using namespace platoonsim;

namespace {

Trajectory make_trajectory(const std::vector<Eigen::VectorXd>& states, double dt,
                           bool with_controls = false) {
    Trajectory traj;
    for (std::size_t k = 0; k < states.size(); ++k) {
        traj.times.push_back(static_cast<double>(k) * dt);
        traj.states.push_back(states[k]);
        traj.energy.push_back(0.0);
        if (with_controls) traj.controls.push_back(Eigen::VectorXd::Zero(states[k].size()));
    }
    return traj;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("the benchmark presets start at the frozen disagreement state") {
    const Scenario s = preset_converging_platoon();
    const Eigen::VectorXd p = s.reference_positions();
    const std::vector<Eigen::VectorXd> y = to_disagreement({s.x0}, p);
    const double expected[6] = {0.0, -0.5, -0.6, -0.8, -0.9, -0.9};
    for (int i = 0; i < 6; ++i)
        CHECK(y[0](i) == doctest::Approx(expected[i]).epsilon(1e-12));

    // Round trip back to absolute coordinates.
    CHECK((y[0] + p - s.x0).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK_THROWS_AS(to_disagreement({Eigen::VectorXd::Zero(3)}, p), Error);
}

TEST_CASE("the trajectory overload of to_disagreement shifts states only") {
    Trajectory traj = make_trajectory({vec2(1.0, 2.0), vec2(1.5, 2.5)}, 0.1, true);
    traj.energy = {7.0, 8.0};
    const Trajectory y = to_disagreement(traj, vec2(1.0, 1.0));
    CHECK(y.times == traj.times);
    CHECK(y.energy == traj.energy);
    CHECK(y.has_controls());
    CHECK(y.states[0] == vec2(0.0, 1.0));
    CHECK(y.states[1] == vec2(0.5, 1.5));
}

TEST_CASE("sign condition accepts motionless runs and rejects gradient ascent") {
    const Eigen::MatrixXd l = SensingGraph::chain(2).laplacian();

    // Zero controls: every product is exactly zero.
    const Trajectory still =
        make_trajectory({vec2(1.0, -1.0), vec2(1.0, -1.0)}, 0.1, true);
    const CheckEntry ok = check_sign_condition(still, l, 1e-12);
    CHECK(ok.name == "sign-condition");
    CHECK(ok.pass);
    CHECK(ok.worst_margin == 0.0);
    CHECK(ok.note.find("recorded controls") != std::string::npos);

    // Moving along +grad: products are positive everywhere.
    Trajectory ascent = make_trajectory({vec2(1.0, -1.0), vec2(1.1, -1.1)}, 0.1, true);
    ascent.controls[0] = vec2(1.0, -1.0);
    ascent.controls[1] = vec2(1.0, -1.0);
    const CheckEntry bad = check_sign_condition(ascent, l, 1e-12);
    CHECK(!bad.pass);
    // Worst product: velocity 1 times gradient 2*1.1 at the second sample.
    CHECK(bad.worst_margin == doctest::Approx(2.2).epsilon(1e-12));
    CHECK(bad.worst_time == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(bad.worst_index == 0);

    CHECK_THROWS_AS(check_sign_condition(Trajectory{}, l, 1e-12), Error);
}

TEST_CASE("sign condition falls back to forward differences without controls") {
    const Eigen::MatrixXd l = SensingGraph::chain(2).laplacian();
    const Trajectory ascent =
        make_trajectory({vec2(1.0, -1.0), vec2(1.1, -1.1)}, 0.1, false);
    const CheckEntry entry = check_sign_condition(ascent, l, 1e-12);
    CHECK(entry.note.find("forward differences") != std::string::npos);
    CHECK(!entry.pass);
    // Velocity (0.1, -0.1)/0.1 against gradient (2, -2) at the first sample.
    CHECK(entry.worst_margin == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(entry.worst_time == 0.0);
}

TEST_CASE("energy monotone check measures the largest step increase") {
    const Eigen::MatrixXd l = SensingGraph::chain(2).laplacian();

    // Shrinking profile: V_k = 2 c_k^2 for c = 1, 0.9, ..., 0.5. The largest
    // (least negative) increase is V(0.5) - V(0.6) = -0.22.
    std::vector<Eigen::VectorXd> shrink;
    for (int k = 0; k <= 5; ++k) {
        const double c = 1.0 - 0.1 * k;
        shrink.push_back(vec2(c, -c));
    }
    const CheckEntry ok = check_energy_monotone(make_trajectory(shrink, 0.1), l, 1e-12);
    CHECK(ok.name == "energy-monotone");
    CHECK(ok.pass);
    CHECK(ok.worst_margin == doctest::Approx(-0.22).epsilon(1e-12));
    CHECK(ok.worst_time == doctest::Approx(0.5).epsilon(1e-12));

    // Growing profile fails; the steepest increase is the final step.
    std::vector<Eigen::VectorXd> grow;
    for (int k = 0; k <= 3; ++k) grow.push_back(vec2(1.0 + 0.1 * k, -(1.0 + 0.1 * k)));
    const CheckEntry bad = check_energy_monotone(make_trajectory(grow, 0.1), l, 1e-12);
    CHECK(!bad.pass);
    // Largest increase: V(1.3) - V(1.2) = 2 (1.69 - 1.44) = 0.5.
    CHECK(bad.worst_margin == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(check_energy_monotone(Trajectory{}, l, 1e-12), Error);
}

TEST_CASE("min/max monotonicity accepts contraction and flags expansion") {
    std::vector<Eigen::VectorXd> contract;
    for (int k = 0; k <= 5; ++k) {
        const double c = std::pow(0.9, k);
        contract.push_back(vec2(c, -c));
    }
    const CheckEntry ok = check_minmax_monotone(make_trajectory(contract, 0.1), 1e-6);
    CHECK(ok.name == "minmax-monotone");
    CHECK(ok.pass);
    CHECK(ok.worst_margin < 0.0);

    std::vector<Eigen::VectorXd> expand;
    for (int k = 0; k <= 5; ++k) expand.push_back(vec2(1.0 + 0.1 * k, -(1.0 + 0.1 * k)));
    const CheckEntry bad = check_minmax_monotone(make_trajectory(expand, 0.1), 1e-6);
    CHECK(!bad.pass);
    CHECK(bad.worst_margin == doctest::Approx(0.1).epsilon(1e-9));

    CHECK_THROWS_AS(check_minmax_monotone(Trajectory{}, 1e-6), Error);
}

TEST_CASE("hull containment tracks the initial spread of x - p") {
    const Eigen::VectorXd p = vec2(0.0, 0.0);

    // A constant run touches the hull boundary with margin exactly zero.
    const Trajectory still = make_trajectory({vec2(0.0, 1.0), vec2(0.0, 1.0)}, 0.1);
    const CheckEntry ok = check_hull_containment(still, p, 1e-6);
    CHECK(ok.name == "hull-containment");
    CHECK(ok.pass);
    CHECK(ok.worst_margin == 0.0);

    // Escaping run: agent 1 climbs 0.5 above the initial hull [0, 1].
    std::vector<Eigen::VectorXd> escape;
    for (int k = 0; k <= 5; ++k) escape.push_back(vec2(0.1 * k, 1.0 + 0.1 * k));
    const CheckEntry bad = check_hull_containment(make_trajectory(escape, 0.1), p, 1e-6);
    CHECK(!bad.pass);
    CHECK(bad.worst_margin == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bad.worst_index == 1);
    CHECK(bad.worst_time == doctest::Approx(0.5).epsilon(1e-12));

    // The hull lives in x - p coordinates: shifting p shifts the hull.
    const CheckEntry shifted =
        check_hull_containment(make_trajectory(escape, 0.1), vec2(0.0, 0.5), 1e-6);
    // h = x - p spans [0, 0.5] initially; agent 1 reaches 1.0: margin 0.5 again
    // but agent 0 reaches 0.5 exactly on the hull edge.
    CHECK(shifted.worst_margin == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(check_hull_containment(Trajectory{}, p, 1e-6), Error);
    CHECK_THROWS_AS(check_hull_containment(still, Eigen::VectorXd::Zero(3), 1e-6), Error);
}

TEST_CASE("residual bounds allow twice the accumulated measurement noise") {
    const SensingGraph g = SensingGraph::chain(3);
    const DesiredOffsets offsets = DesiredOffsets::uniform_chain(g, 1.0);
    Eigen::VectorXd p(3);
    p << 0.0, 1.0, 2.0;

    // Exactly at the formation: every residual is zero, margins are the
    // negated bounds, the worst comes from a degree-1 end agent.
    const CheckEntry ok = check_residual_bounds(p, g, offsets, 0.1, 1e-3);
    CHECK(ok.name == "residual-bounds");
    CHECK(ok.pass);
    CHECK(ok.worst_margin == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(ok.worst_index == 0);

    // Agent 0 displaced by 0.5: its residual 0.5 exceeds 2 * 1 * 0.1 by 0.3.
    Eigen::VectorXd displaced = p;
    displaced(0) += 0.5;
    const CheckEntry bad = check_residual_bounds(displaced, g, offsets, 0.1, 1e-3);
    CHECK(!bad.pass);
    CHECK(bad.worst_margin == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bad.worst_index == 0);

    CHECK_THROWS_AS(check_residual_bounds(Eigen::VectorXd{}, g, offsets, 0.1, 1e-3), Error);
    CHECK_THROWS_AS(check_residual_bounds(Eigen::VectorXd::Zero(4), g, offsets, 0.1, 1e-3),
                    Error);
}

TEST_CASE("chain error bounds match an independent two-sided recursion") {
    // Independent oracle: starting from either end of the chain, the first
    // link tolerates 2 w_bar and each following link adds 4 w_bar; every link
    // obeys the smaller of its two one-sided bounds.
    for (int n = 2; n <= 10; ++n) {
        for (double w_bar : {0.05, 0.1}) {
            std::vector<double> from_front(static_cast<std::size_t>(n + 1), 0.0);
            std::vector<double> from_back(static_cast<std::size_t>(n + 1), 0.0);
            from_front[2] = 2.0 * w_bar;
            for (int l = 3; l <= n; ++l) from_front[static_cast<std::size_t>(l)] =
                from_front[static_cast<std::size_t>(l - 1)] + 4.0 * w_bar;
            from_back[static_cast<std::size_t>(n)] = 2.0 * w_bar;
            for (int l = n - 1; l >= 2; --l) from_back[static_cast<std::size_t>(l)] =
                from_back[static_cast<std::size_t>(l + 1)] + 4.0 * w_bar;

            const std::vector<double> bounds = chain_error_bounds(n, w_bar);
            REQUIRE(bounds.size() == static_cast<std::size_t>(n - 1));
            for (int l = 2; l <= n; ++l) {
                const double expected = std::min(from_front[static_cast<std::size_t>(l)],
                                                 from_back[static_cast<std::size_t>(l)]);
                CHECK(bounds[static_cast<std::size_t>(l - 2)] ==
                      doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("chain error bounds are frozen for the six-agent benchmark") {
    const std::vector<double> bounds = chain_error_bounds(6, 0.1);
    REQUIRE(bounds.size() == 5);
    const double expected[5] = {0.2, 0.6, 1.0, 0.6, 0.2};
    for (int i = 0; i < 5; ++i)
        CHECK(bounds[static_cast<std::size_t>(i)] ==
              doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("chain error bounds are symmetric under reversing the chain") {
    for (int n = 2; n <= 12; ++n) {
        const std::vector<double> bounds = chain_error_bounds(n, 0.07);
        const std::size_t m = bounds.size();
        for (std::size_t i = 0; i < m; ++i)
            CHECK(bounds[i] == doctest::Approx(bounds[m - 1 - i]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(chain_error_bounds(1, 0.1), Error);
    CHECK_THROWS_AS(chain_error_bounds(6, -0.1), Error);
}

TEST_CASE("chain link check flags a link that exceeds its positional bound") {
    const SensingGraph g = SensingGraph::chain(6);
    const DesiredOffsets offsets = DesiredOffsets::uniform_chain(g, 1.0);
    Eigen::VectorXd p(6);
    for (int i = 0; i < 6; ++i) p(i) = i;

    const CheckEntry ok = check_chain_errors(p, g, offsets, 0.1, 1e-3);
    CHECK(ok.name == "chain-bounds");
    CHECK(ok.pass);
    CHECK(ok.worst_margin == doctest::Approx(-0.2).epsilon(1e-12));

    // Pushing agent 3 (0-based 2) up by 0.7 overloads the second link, whose
    // bound is 0.6, without touching the third link's 1.0 allowance.
    Eigen::VectorXd displaced = p;
    displaced(2) += 0.7;
    const CheckEntry bad = check_chain_errors(displaced, g, offsets, 0.1, 1e-3);
    CHECK(!bad.pass);
    CHECK(bad.worst_margin == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(bad.worst_index == 2);

    const SensingGraph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK_THROWS_AS(
        check_chain_errors(Eigen::VectorXd::Zero(4), star, DesiredOffsets(star), 0.1, 1e-3),
        Error);
    CHECK_THROWS_AS(check_chain_errors(Eigen::VectorXd{}, g, offsets, 0.1, 1e-3), Error);
}

TEST_CASE("the energy step tolerance follows its closed form") {
    const Scenario s = preset_converging_platoon();
    const Eigen::MatrixXd l = s.graph.laplacian();

    // Hand recomputation: scale * gain^2 * n * dt^2 * ||L||_F * V(y0) with
    // ||L||_F = sqrt(18 + 10) for the six-agent unit chain and V(y0) = 0.155.
    const double expected =
        10.0 * 9.0 * 6.0 * 1e-6 * std::sqrt(28.0) * 0.155;
    CHECK(energy_monotone_tolerance(s, l, 0.155) ==
          doctest::Approx(expected).epsilon(1e-12));

    // The floor kicks in when the initial energy vanishes.
    CHECK(energy_monotone_tolerance(s, l, 0.0) == 1e-12);
}

TEST_CASE("certifying the converging preset passes all six checks") {
    const SimulationResult result = run(preset_converging_platoon());
    CHECK(result.verdict.status == VerdictStatus::Converged);
    REQUIRE(result.report.entries.size() == 6);
    CHECK(result.report.entries[0].name == "sign-condition");
    CHECK(result.report.entries[1].name == "energy-monotone");
    CHECK(result.report.entries[2].name == "minmax-monotone");
    CHECK(result.report.entries[3].name == "hull-containment");
    CHECK(result.report.entries[4].name == "residual-bounds");
    CHECK(result.report.entries[5].name == "chain-bounds");
    CHECK(result.report.all_pass());
    for (const CheckEntry& e : result.report.entries) CHECK(e.pass);

    const Eigen::VectorXd p = preset_converging_platoon().reference_positions();
    CHECK((result.reference - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("certifying the oscillating preset keeps the guarantees that survive") {
    const SimulationResult result = run(preset_oscillating_platoon());
    CHECK(result.verdict.status == VerdictStatus::Oscillating);
    // No converged limit: the two limit checks are skipped.
    REQUIRE(result.report.entries.size() == 4);
    CHECK(!result.report.all_pass());

    const CheckEntry* sign = result.report.find("sign-condition");
    REQUIRE(sign != nullptr);
    CHECK(!sign->pass);  // per-edge deadzones carry no coordinate-wise guarantee

    const CheckEntry* energy = result.report.find("energy-monotone");
    REQUIRE(energy != nullptr);
    CHECK(energy->pass);  // increases stay inside the discretization envelope

    const CheckEntry* hull = result.report.find("hull-containment");
    REQUIRE(hull != nullptr);
    CHECK(hull->pass);
    CHECK(hull->worst_margin == 0.0);

    CHECK(result.report.find("residual-bounds") == nullptr);
    CHECK(result.report.find("chain-bounds") == nullptr);
    CHECK(result.report.find("no-such-check") == nullptr);
}

TEST_CASE("certification is a pure function of its inputs") {
    const Scenario s = preset_two_agent_drift();
    const Trajectory traj = integrate(s);
    const Eigen::VectorXd p = s.reference_positions();
    const ConvergenceVerdict verdict = detect(traj, s.detection.window, s.detection.tol);

    const CertificationReport a = certify_trajectory(traj, s, p, verdict);
    const CertificationReport b = certify_trajectory(traj, s, p, verdict);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].name == b.entries[i].name);
        CHECK(a.entries[i].pass == b.entries[i].pass);
        CHECK(a.entries[i].worst_margin == b.entries[i].worst_margin);
        CHECK(a.entries[i].tolerance == b.entries[i].tolerance);
    }
}

TEST_CASE("converged node-law runs inside the noise budget honor the limit bounds") {
    SplitMix64 rng(61);
    int converged_runs = 0;
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 3 + rng.next_int(4);
        const bool use_chain = (rep % 2 == 0);
        std::vector<Edge> edges;
        if (use_chain) {
            for (int v = 1; v < n; ++v) edges.push_back({v - 1, v, 1.0});
        } else {
            for (int v = 1; v < n; ++v) edges.push_back({rng.next_int(v), v, 1.0});
        }
        SensingGraph graph(n, edges);

        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) p(i) = rng.next_range(-2.0, 2.0);
        DesiredOffsets offsets(graph);
        for (const Edge& e : graph.edges()) offsets.set(e.j, e.i, p(e.j) - p(e.i));

        Eigen::VectorXd x0(n);
        for (int i = 0; i < n; ++i) x0(i) = p(i) + rng.next_range(-1.0, 1.0);

        const double w_bar = rng.next_range(0.02, 0.08);
        EdgeDisturbanceMap disturbances;
        for (const Edge& e : graph.edges()) {
            disturbances.set(e.j, e.i,
                             DisturbanceSpec::constant(rng.next_range(-w_bar, w_bar)));
            disturbances.set(e.i, e.j,
                             DisturbanceSpec::constant(rng.next_range(-w_bar, w_bar)));
        }

        ControllerSpec controller;
        controller.kind = ControllerKind::NodeDeadzone;
        controller.gain = rng.next_range(0.5, 1.5);
        controller.threshold = {ThresholdKind::Hard, 0.0, 0.0};
        controller.w_bar = w_bar;

        const Scenario scenario{std::move(graph), std::move(offsets), std::move(x0),
                                std::move(disturbances), controller,
                                {1e-3, 40.0}, {10.0, 1e-3}, 0};
        const SimulationResult result = run(scenario);
        if (result.verdict.status != VerdictStatus::Converged) continue;
        ++converged_runs;

        const CheckEntry* residual = result.report.find("residual-bounds");
        REQUIRE(residual != nullptr);
        CHECK(residual->pass);
        if (scenario.graph.is_chain()) {
            const CheckEntry* chain = result.report.find("chain-bounds");
            REQUIRE(chain != nullptr);
            CHECK(chain->pass);
        }
        CHECK(result.report.find("hull-containment")->pass);
    }
    // The budgeted runs overwhelmingly settle; make sure the loop above
    // actually exercised the limit checks.
    CHECK(converged_runs >= 6);
}
