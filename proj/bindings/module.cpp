#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "platoonsim/certify.hpp"
#include "platoonsim/explore.hpp"
#include "platoonsim/presets.hpp"
#include "platoonsim/scenario_io.hpp"
#include "platoonsim/summary.hpp"
#include "platoonsim/trajectory_io.hpp"

namespace py = pybind11;
using namespace platoonsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation and certification toolkit for 1-D multi-agent platoons "
              "under deadzone-based decentralized control";

    py::register_exception<Error>(m, "PlatoonError", PyExc_RuntimeError);

    // ---- graph ----
    py::class_<Edge>(m, "Edge")
        .def(py::init([](int i, int j, double weight) { return Edge{i, j, weight}; }),
             py::arg("i"), py::arg("j"), py::arg("weight") = 1.0)
        .def_readonly("i", &Edge::i)
        .def_readonly("j", &Edge::j)
        .def_readonly("weight", &Edge::weight);

    py::class_<SensingGraph>(m, "SensingGraph")
        .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
        .def_static("chain", &SensingGraph::chain, py::arg("n"))
        .def_property_readonly("n", &SensingGraph::size)
        .def("edges", &SensingGraph::edges)
        .def("has_edge", &SensingGraph::has_edge, py::arg("a"), py::arg("b"))
        .def("weight", &SensingGraph::weight, py::arg("a"), py::arg("b"))
        .def("degree", &SensingGraph::degree, py::arg("a"))
        .def("neighbors", &SensingGraph::neighbors, py::arg("a"))
        .def("is_connected", &SensingGraph::is_connected)
        .def("is_chain", &SensingGraph::is_chain)
        .def("laplacian", &SensingGraph::laplacian);

    py::class_<DesiredOffsets>(m, "DesiredOffsets")
        .def(py::init<const SensingGraph&>(), py::arg("graph"))
        .def_static("uniform_chain", &DesiredOffsets::uniform_chain, py::arg("chain"),
                    py::arg("spacing"))
        .def("set", &DesiredOffsets::set, py::arg("j"), py::arg("i"), py::arg("d_ji"))
        .def("get", &DesiredOffsets::get, py::arg("j"), py::arg("i"))
        .def("entries", &DesiredOffsets::entries);

    m.def("solve_reference_positions", &solve_reference_positions, py::arg("graph"),
          py::arg("offsets"), py::arg("tol") = 1e-9);

    // ---- energy ----
    py::enum_<Definiteness>(m, "Definiteness")
        .value("POSITIVE_DEFINITE", Definiteness::PositiveDefinite)
        .value("PSD_RANK_DEFICIENT", Definiteness::PsdRankDeficient)
        .value("INDEFINITE", Definiteness::Indefinite);

    py::class_<Classification>(m, "Classification")
        .def_readonly("kind", &Classification::kind)
        .def_readonly("kernel_basis", &Classification::kernel_basis);

    m.def("classify", &classify, py::arg("a"), py::arg("tol") = 1e-9);

    py::class_<QuadraticEnergy>(m, "QuadraticEnergy")
        .def(py::init<Eigen::MatrixXd, double>(), py::arg("a"), py::arg("tol") = 1e-9)
        .def_property_readonly("dim", &QuadraticEnergy::dim)
        .def_property_readonly("matrix", &QuadraticEnergy::matrix)
        .def("value", &QuadraticEnergy::value, py::arg("x"))
        .def("gradient", &QuadraticEnergy::gradient, py::arg("x"))
        .def_property_readonly("classification", &QuadraticEnergy::classification)
        .def_property_readonly("kernel_basis", &QuadraticEnergy::kernel_basis)
        .def("kernel_is_zero_free", &QuadraticEnergy::kernel_is_zero_free);

    m.def("disagreement", &disagreement, py::arg("laplacian"), py::arg("x"));

    // ---- deadzone ----
    py::enum_<ThresholdKind>(m, "ThresholdKind")
        .value("HARD", ThresholdKind::Hard)
        .value("RAMP", ThresholdKind::Ramp)
        .value("RAMP_CONTINUOUS", ThresholdKind::RampContinuous);

    py::class_<ThresholdSpec>(m, "ThresholdSpec")
        .def(py::init([](ThresholdKind kind, double w, double delta_w) {
                 return ThresholdSpec{kind, w, delta_w};
             }),
             py::arg("kind") = ThresholdKind::Hard, py::arg("w") = 0.0,
             py::arg("delta_w") = 0.0)
        .def_readwrite("kind", &ThresholdSpec::kind)
        .def_readwrite("w", &ThresholdSpec::width)
        .def_readwrite("delta_w", &ThresholdSpec::ramp_width);

    m.def("eval_hard", &eval_hard, py::arg("x"), py::arg("w"));
    m.def("eval_ramp", &eval_ramp, py::arg("x"), py::arg("w"), py::arg("delta_w"));
    m.def("eval_ramp_continuous", &eval_ramp_continuous, py::arg("x"), py::arg("w"),
          py::arg("delta_w"));
    m.def("eval_threshold",
          py::overload_cast<const ThresholdSpec&, double, double>(&eval_threshold),
          py::arg("spec"), py::arg("width"), py::arg("x"));
    m.def("eval_threshold", py::overload_cast<const ThresholdSpec&, double>(&eval_threshold),
          py::arg("spec"), py::arg("x"));

    py::class_<ThresholdViolation>(m, "ThresholdViolation")
        .def_readonly("location", &ThresholdViolation::location)
        .def_readonly("magnitude", &ThresholdViolation::magnitude);

    py::class_<ValidityReport>(m, "ValidityReport")
        .def_readonly("monotone", &ValidityReport::monotone)
        .def_readonly("zero_set", &ValidityReport::zero_set)
        .def_readonly("worst_monotonicity", &ValidityReport::worst_monotonicity)
        .def_readonly("worst_zero_set", &ValidityReport::worst_zero_set)
        .def("valid", &ValidityReport::valid);

    m.def("check_threshold_validity", &check_threshold_validity, py::arg("spec"),
          py::arg("samples") = 4001, py::arg("range") = 1.0);

    // ---- disturbance ----
    py::class_<PulseSpec>(m, "PulseSpec")
        .def(py::init([](double magnitude, double bias, double period, double pulse_width,
                         double phase_delay) {
                 return PulseSpec{magnitude, bias, period, pulse_width, phase_delay};
             }),
             py::arg("magnitude"), py::arg("bias") = 0.0, py::arg("period") = 1.0,
             py::arg("pulse_width") = 1.0, py::arg("phase_delay") = 0.0)
        .def_readwrite("magnitude", &PulseSpec::magnitude)
        .def_readwrite("bias", &PulseSpec::bias)
        .def_readwrite("period", &PulseSpec::period)
        .def_readwrite("pulse_width", &PulseSpec::pulse_width)
        .def_readwrite("phase_delay", &PulseSpec::phase_delay);

    py::class_<DisturbanceSpec> disturbance(m, "DisturbanceSpec");
    py::enum_<DisturbanceSpec::Kind>(disturbance, "Kind")
        .value("ZERO", DisturbanceSpec::Kind::Zero)
        .value("CONSTANT", DisturbanceSpec::Kind::Constant)
        .value("PULSE", DisturbanceSpec::Kind::Pulse)
        .value("UNIFORM_RANDOM", DisturbanceSpec::Kind::UniformRandom);
    disturbance.def_static("zero", &DisturbanceSpec::zero)
        .def_static("constant", &DisturbanceSpec::constant, py::arg("value"))
        .def_static("pulse", &DisturbanceSpec::pulse, py::arg("spec"))
        .def_static("uniform_random", &DisturbanceSpec::uniform_random, py::arg("amplitude"),
                    py::arg("seed"), py::arg("hold_time"))
        .def_property_readonly("kind", &DisturbanceSpec::kind)
        .def("sample", &DisturbanceSpec::sample, py::arg("t"))
        .def("max_abs_bound", &DisturbanceSpec::max_abs_bound);

    py::class_<EdgeDisturbanceMap>(m, "EdgeDisturbanceMap")
        .def(py::init<>())
        .def("set", &EdgeDisturbanceMap::set, py::arg("j"), py::arg("i"), py::arg("spec"))
        .def("get", &EdgeDisturbanceMap::get, py::arg("j"), py::arg("i"),
             py::return_value_policy::copy)
        .def_property_readonly("specified_count", &EdgeDisturbanceMap::specified_count);

    py::class_<BoundWarning>(m, "BoundWarning")
        .def_readonly("j", &BoundWarning::j)
        .def_readonly("i", &BoundWarning::i)
        .def_readonly("bound", &BoundWarning::bound)
        .def_readonly("w_bar", &BoundWarning::w_bar);

    m.def("disturbance_bound_warnings", &disturbance_bound_warnings, py::arg("map"),
          py::arg("w_bar"));
    m.def("benchmark_platoon_disturbances", &benchmark_platoon_disturbances);

    // ---- controller ----
    py::enum_<ControllerKind>(m, "ControllerKind")
        .value("NODE_DEADZONE", ControllerKind::NodeDeadzone)
        .value("EDGE_DEADZONE", ControllerKind::EdgeDeadzone)
        .value("PROPORTIONAL", ControllerKind::Proportional);

    py::class_<Measurement>(m, "Measurement")
        .def_readonly("observer", &Measurement::observer)
        .def_readonly("target", &Measurement::target)
        .def_readonly("value", &Measurement::value);

    py::class_<MeasurementSet>(m, "MeasurementSet")
        .def(py::init<int>(), py::arg("n"))
        .def("add", &MeasurementSet::add, py::arg("measurement"))
        .def("for_observer", &MeasurementSet::for_observer, py::arg("i"))
        .def_property_readonly("agents", &MeasurementSet::agents);

    m.def("measure_all", &measure_all, py::arg("x"), py::arg("graph"), py::arg("disturbances"),
          py::arg("t"));

    py::class_<ControllerSpec>(m, "ControllerSpec")
        .def(py::init([](ControllerKind kind, double gain, ThresholdSpec threshold,
                         double w_bar) {
                 return ControllerSpec{kind, gain, threshold, w_bar};
             }),
             py::arg("kind") = ControllerKind::NodeDeadzone, py::arg("gain") = 1.0,
             py::arg("threshold") = ThresholdSpec{}, py::arg("w_bar") = 0.0)
        .def_readwrite("kind", &ControllerSpec::kind)
        .def_readwrite("gain", &ControllerSpec::gain)
        .def_readwrite("threshold", &ControllerSpec::threshold)
        .def_readwrite("w_bar", &ControllerSpec::w_bar);

    m.def("node_deadzone_control", &node_deadzone_control, py::arg("i"), py::arg("measurements"),
          py::arg("offsets"), py::arg("spec"), py::arg("graph"));
    m.def("edge_deadzone_control", &edge_deadzone_control, py::arg("i"), py::arg("measurements"),
          py::arg("offsets"), py::arg("spec"));
    m.def("proportional_control", &proportional_control, py::arg("i"), py::arg("measurements"),
          py::arg("offsets"), py::arg("spec"));
    m.def("control_all", &control_all, py::arg("x"), py::arg("t"), py::arg("graph"),
          py::arg("offsets"), py::arg("disturbances"), py::arg("spec"));

    // ---- scenario ----
    py::class_<IntegrationSpec>(m, "IntegrationSpec")
        .def(py::init([](double dt, double horizon) { return IntegrationSpec{dt, horizon}; }),
             py::arg("dt") = 1e-3, py::arg("horizon") = 30.0)
        .def_readwrite("dt", &IntegrationSpec::dt)
        .def_readwrite("horizon", &IntegrationSpec::horizon);

    py::class_<DetectionSpec>(m, "DetectionSpec")
        .def(py::init([](double window, double tol) { return DetectionSpec{window, tol}; }),
             py::arg("window") = 20.0, py::arg("tol") = 1e-3)
        .def_readwrite("window", &DetectionSpec::window)
        .def_readwrite("tol", &DetectionSpec::tol);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init([](SensingGraph graph, DesiredOffsets offsets, Eigen::VectorXd x0,
                         EdgeDisturbanceMap disturbances, ControllerSpec controller,
                         IntegrationSpec integration, DetectionSpec detection,
                         std::uint64_t seed) {
                 return Scenario{std::move(graph), std::move(offsets), std::move(x0),
                                 std::move(disturbances), controller, integration, detection,
                                 seed};
             }),
             py::arg("graph"), py::arg("offsets"), py::arg("x0"),
             py::arg("disturbances") = EdgeDisturbanceMap{},
             py::arg("controller") = ControllerSpec{},
             py::arg("integration") = IntegrationSpec{},
             py::arg("detection") = DetectionSpec{}, py::arg("seed") = 0)
        .def_readwrite("graph", &Scenario::graph)
        .def_readwrite("offsets", &Scenario::offsets)
        .def_readwrite("x0", &Scenario::x0)
        .def_readwrite("disturbances", &Scenario::disturbances)
        .def_readwrite("controller", &Scenario::controller)
        .def_readwrite("integration", &Scenario::integration)
        .def_readwrite("detection", &Scenario::detection)
        .def_readwrite("seed", &Scenario::seed)
        .def("validate", &Scenario::validate)
        .def("reference_positions", &Scenario::reference_positions, py::arg("tol") = 1e-9)
        .def("bound_warnings", &Scenario::bound_warnings);

    m.def("scenario_to_json_string",
          [](const Scenario& s) { return scenario_to_json(s).dump(2); });
    m.def("scenario_from_json_string", [](const std::string& text) {
        return scenario_from_json(nlohmann::json::parse(text));
    });
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
    m.def("canonical_scenario_string", &canonical_scenario_string);
    m.def("scenario_hash", &scenario_hash);

    // ---- simulate ----
    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init<>())
        .def_readwrite("times", &Trajectory::times)
        .def_readwrite("states", &Trajectory::states)
        .def_readwrite("controls", &Trajectory::controls)
        .def_readwrite("energy", &Trajectory::energy)
        .def_property_readonly("samples", &Trajectory::samples)
        .def_property_readonly("dim", &Trajectory::dim)
        .def("has_controls", &Trajectory::has_controls)
        .def("dt", &Trajectory::dt)
        .def("states_matrix", [](const Trajectory& t) {
            Eigen::MatrixXd out(static_cast<Eigen::Index>(t.samples()), t.dim());
            for (std::size_t k = 0; k < t.samples(); ++k) {
                out.row(static_cast<Eigen::Index>(k)) = t.states[k];
            }
            return out;
        });

    py::enum_<VerdictStatus>(m, "VerdictStatus")
        .value("CONVERGED", VerdictStatus::Converged)
        .value("OSCILLATING", VerdictStatus::Oscillating)
        .value("UNDECIDED", VerdictStatus::Undecided);

    py::class_<ConvergenceVerdict>(m, "ConvergenceVerdict")
        .def_readonly("status", &ConvergenceVerdict::status)
        .def_readonly("x_star", &ConvergenceVerdict::x_star)
        .def_readonly("tail_variation", &ConvergenceVerdict::tail_variation)
        .def_readonly("oscillation_amplitude", &ConvergenceVerdict::oscillation_amplitude);

    m.def("integrate", &integrate, py::arg("scenario"));
    m.def("detect", &detect, py::arg("trajectory"), py::arg("window"), py::arg("tol"));

    // ---- certify ----
    py::class_<CheckEntry>(m, "CheckEntry")
        .def_readonly("name", &CheckEntry::name)
        .def_readonly("pass_", &CheckEntry::pass)
        .def_readonly("worst_margin", &CheckEntry::worst_margin)
        .def_readonly("tolerance", &CheckEntry::tolerance)
        .def_readonly("worst_time", &CheckEntry::worst_time)
        .def_readonly("worst_index", &CheckEntry::worst_index)
        .def_readonly("note", &CheckEntry::note);

    py::class_<CertificationReport>(m, "CertificationReport")
        .def_readonly("entries", &CertificationReport::entries)
        .def("all_pass", &CertificationReport::all_pass)
        .def("find", [](const CertificationReport& r, const std::string& name) -> py::object {
            const CheckEntry* entry = r.find(name);
            return entry ? py::cast(*entry) : py::none();
        });

    m.def("to_disagreement",
          py::overload_cast<const Trajectory&, const Eigen::VectorXd&>(&to_disagreement),
          py::arg("trajectory"), py::arg("p"));
    m.def("check_sign_condition", &check_sign_condition, py::arg("y_trajectory"), py::arg("a"),
          py::arg("tol"));
    m.def("check_energy_monotone", &check_energy_monotone, py::arg("y_trajectory"), py::arg("a"),
          py::arg("tol"));
    m.def("check_minmax_monotone", &check_minmax_monotone, py::arg("y_trajectory"),
          py::arg("tol"));
    m.def("check_hull_containment", &check_hull_containment, py::arg("trajectory"), py::arg("p"),
          py::arg("tol"));
    m.def("check_residual_bounds", &check_residual_bounds, py::arg("x_star"), py::arg("graph"),
          py::arg("offsets"), py::arg("w_bar"), py::arg("slack"));
    m.def("chain_error_bounds", &chain_error_bounds, py::arg("n"), py::arg("w_bar"));
    m.def("check_chain_errors", &check_chain_errors, py::arg("x_star"), py::arg("graph"),
          py::arg("offsets"), py::arg("w_bar"), py::arg("slack"));

    // Must be registered before certify_trajectory, whose default argument
    // needs the type converter at definition time.
    py::class_<CertifyOptions>(m, "CertifyOptions")
        .def(py::init<>())
        .def_readwrite("sign_tol", &CertifyOptions::sign_tol)
        .def_readwrite("minmax_tol", &CertifyOptions::minmax_tol)
        .def_readwrite("hull_tol", &CertifyOptions::hull_tol)
        .def_readwrite("energy_tol_scale", &CertifyOptions::energy_tol_scale)
        .def_readwrite("energy_tol_floor", &CertifyOptions::energy_tol_floor);

    m.def("certify_trajectory", &certify_trajectory, py::arg("trajectory"), py::arg("scenario"),
          py::arg("p"), py::arg("verdict"), py::arg("options") = CertifyOptions{});

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("trajectory", &SimulationResult::trajectory)
        .def_readonly("verdict", &SimulationResult::verdict)
        .def_readonly("report", &SimulationResult::report)
        .def_readonly("reference", &SimulationResult::reference);

    m.def("run", &run, py::arg("scenario"));

    // ---- explore ----
    py::class_<SynthesisPolicy> policy(m, "SynthesisPolicy");
    py::enum_<SynthesisPolicy::Kind>(policy, "Kind")
        .value("GRADIENT_OPPOSED", SynthesisPolicy::Kind::GradientOpposed)
        .value("RANDOM_FEASIBLE", SynthesisPolicy::Kind::RandomFeasible)
        .value("AXIS_SWITCHING", SynthesisPolicy::Kind::AxisSwitching)
        .value("STALL", SynthesisPolicy::Kind::Stall);
    policy.def(py::init<>())
        .def_readwrite("kind", &SynthesisPolicy::kind)
        .def_readwrite("rate", &SynthesisPolicy::rate)
        .def_readwrite("zero_probability", &SynthesisPolicy::zero_probability)
        .def_readwrite("switch_interval", &SynthesisPolicy::switch_interval)
        .def_readwrite("stall_time", &SynthesisPolicy::stall_time)
        .def_readwrite("seed", &SynthesisPolicy::seed);

    m.def("synthesize", &synthesize, py::arg("a"), py::arg("x0"), py::arg("policy"),
          py::arg("dt"), py::arg("horizon"));

    py::class_<AccumulationEstimate>(m, "AccumulationEstimate")
        .def_readonly("centers", &AccumulationEstimate::centers)
        .def_readonly("radii", &AccumulationEstimate::radii)
        .def_readonly("counts", &AccumulationEstimate::counts)
        .def_readonly("top_two_alternations", &AccumulationEstimate::top_two_alternations)
        .def("clusters", &AccumulationEstimate::clusters);

    m.def("estimate_accumulation", &estimate_accumulation, py::arg("trajectory"),
          py::arg("tail_fraction"), py::arg("radius"));
    m.def("kernel_distance", &kernel_distance, py::arg("energy"), py::arg("point"));

    py::enum_<MatrixFamily>(m, "MatrixFamily")
        .value("POSITIVE_DEFINITE", MatrixFamily::PositiveDefinite)
        .value("PSD_ZERO_FREE_KERNEL", MatrixFamily::PsdZeroFreeKernel)
        .value("PSD_KERNEL_WITH_ZEROS", MatrixFamily::PsdKernelWithZeros);

    py::enum_<TrialOutcome>(m, "TrialOutcome")
        .value("CONVERGED_IN_KERNEL", TrialOutcome::ConvergedInKernel)
        .value("CONVERGED_OFF_KERNEL", TrialOutcome::ConvergedOffKernel)
        .value("MULTI_CLUSTER", TrialOutcome::MultiCluster)
        .value("DIVERGING", TrialOutcome::Diverging)
        .value("UNDECIDED", TrialOutcome::Undecided);

    py::class_<SearchOptions>(m, "SearchOptions")
        .def(py::init<>())
        .def_readwrite("trials", &SearchOptions::trials)
        .def_readwrite("seed", &SearchOptions::seed)
        .def_readwrite("min_dim", &SearchOptions::min_dim)
        .def_readwrite("max_dim", &SearchOptions::max_dim)
        .def_readwrite("dt", &SearchOptions::dt)
        .def_readwrite("horizon", &SearchOptions::horizon)
        .def_readwrite("detect_window", &SearchOptions::detect_window)
        .def_readwrite("detect_tol", &SearchOptions::detect_tol)
        .def_readwrite("cluster_radius", &SearchOptions::cluster_radius)
        .def_readwrite("tail_fraction", &SearchOptions::tail_fraction)
        .def_readwrite("include_stall", &SearchOptions::include_stall);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("index", &TrialRecord::index)
        .def_readonly("policy", &TrialRecord::policy)
        .def_readonly("a", &TrialRecord::a)
        .def_readonly("x0", &TrialRecord::x0)
        .def_readonly("outcome", &TrialRecord::outcome)
        .def_readonly("limit_kernel_distance", &TrialRecord::limit_kernel_distance)
        .def_readonly("clusters", &TrialRecord::clusters)
        .def_readonly("max_norm", &TrialRecord::max_norm);

    py::class_<SearchReport>(m, "SearchReport")
        .def_readonly("family", &SearchReport::family)
        .def_readonly("trials", &SearchReport::trials)
        .def_readonly("tally", &SearchReport::tally)
        .def_readonly("interesting", &SearchReport::interesting)
        .def_readonly("theorem_contradiction", &SearchReport::theorem_contradiction)
        .def_readonly("contradiction_detail", &SearchReport::contradiction_detail);

    m.def("search_counterexample", &search_counterexample, py::arg("family"),
          py::arg("options") = SearchOptions{});

    // ---- presets, io, reports ----
    m.def("preset_names", []() { return preset_names(); });
    m.def("make_preset", &make_preset, py::arg("name"));
    m.def("preset_oscillating_platoon", &preset_oscillating_platoon);
    m.def("preset_converging_platoon", &preset_converging_platoon);
    m.def("preset_two_agent_drift", &preset_two_agent_drift);

    m.def("trajectory_csv", &trajectory_csv, py::arg("trajectory"));
    m.def("save_trajectory_csv", &save_trajectory_csv, py::arg("trajectory"), py::arg("path"));
    m.def("load_trajectory_csv", &load_trajectory_csv, py::arg("path"));

    m.def("run_summary_text", &run_summary_text, py::arg("scenario"), py::arg("result"));
    m.def("certification_report_text", &certification_report_text, py::arg("report"));
    m.def("search_report_text", &search_report_text, py::arg("report"));

    m.attr("__version__") = "0.1.0";
}
