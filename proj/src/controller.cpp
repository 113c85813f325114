#include "platoonsim/controller.hpp"

namespace platoonsim {

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::NodeDeadzone: return "node-deadzone";
        case ControllerKind::EdgeDeadzone: return "edge-deadzone";
        case ControllerKind::Proportional: return "proportional";
    }
    return "?";
}

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "node-deadzone") return ControllerKind::NodeDeadzone;
    if (name == "edge-deadzone") return ControllerKind::EdgeDeadzone;
    if (name == "proportional") return ControllerKind::Proportional;
    throw Error("unknown controller kind: " + name);
}

MeasurementSet measure_all(const Eigen::VectorXd& x, const SensingGraph& g,
                           const EdgeDisturbanceMap& disturbances, double t) {
    if (x.size() != g.size()) throw Error("state dimension does not match the sensing graph");
    MeasurementSet out(g.size());
    for (const Edge& e : g.edges()) {
        out.add({e.i, e.j, x[e.j] - x[e.i] + disturbances.get(e.j, e.i).sample(t)});
        out.add({e.j, e.i, x[e.i] - x[e.j] + disturbances.get(e.i, e.j).sample(t)});
    }
    return out;
}

double node_deadzone_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                             const ControllerSpec& spec, const SensingGraph& g) {
    double aggregated = 0.0;
    for (const Measurement& m : meas.for_observer(i)) {
        aggregated += m.value - offsets.get(m.target, i);
    }
    const double width = g.degree(i) * spec.w_bar;
    return spec.gain * eval_threshold(spec.threshold, width, aggregated);
}

double edge_deadzone_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                             const ControllerSpec& spec) {
    double total = 0.0;
    for (const Measurement& m : meas.for_observer(i)) {
        total += eval_threshold(spec.threshold, spec.w_bar, m.value - offsets.get(m.target, i));
    }
    return spec.gain * total;
}

double proportional_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                            const ControllerSpec& spec) {
    double total = 0.0;
    for (const Measurement& m : meas.for_observer(i)) {
        total += m.value - offsets.get(m.target, i);
    }
    return spec.gain * total;
}

Eigen::VectorXd control_all(const Eigen::VectorXd& x, double t, const SensingGraph& g,
                            const DesiredOffsets& offsets, const EdgeDisturbanceMap& disturbances,
                            const ControllerSpec& spec) {
    const MeasurementSet meas = measure_all(x, g, disturbances, t);
    Eigen::VectorXd u(g.size());
    for (int i = 0; i < g.size(); ++i) {
        switch (spec.kind) {
            case ControllerKind::NodeDeadzone:
                u[i] = node_deadzone_control(i, meas, offsets, spec, g);
                break;
            case ControllerKind::EdgeDeadzone:
                u[i] = edge_deadzone_control(i, meas, offsets, spec);
                break;
            case ControllerKind::Proportional:
                u[i] = proportional_control(i, meas, offsets, spec);
                break;
        }
    }
    return u;
}

}  // namespace platoonsim
