#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/deadzone.hpp"
#include "platoonsim/disturbance.hpp"
#include "platoonsim/graph.hpp"

namespace platoonsim {

/// One relative measurement: observer i sees target j at
/// value = x_j - x_i + w_ji(t).
struct Measurement {
    int observer = 0;
    int target = 0;
    double value = 0.0;
};

/// Measurements grouped by observer, two per undirected sensing edge.
class MeasurementSet {
public:
    explicit MeasurementSet(int n) : by_observer_(static_cast<std::size_t>(n)) {}

    void add(const Measurement& m) { by_observer_.at(static_cast<std::size_t>(m.observer)).push_back(m); }
    const std::vector<Measurement>& for_observer(int i) const {
        return by_observer_.at(static_cast<std::size_t>(i));
    }
    int agents() const { return static_cast<int>(by_observer_.size()); }

private:
    std::vector<std::vector<Measurement>> by_observer_;
};

/// Samples every directed measurement of the graph at time t, including the
/// per-edge disturbance.
MeasurementSet measure_all(const Eigen::VectorXd& x, const SensingGraph& g,
                           const EdgeDisturbanceMap& disturbances, double t);

enum class ControllerKind {
    NodeDeadzone,  ///< one deadzone around the aggregated offset error, width degree * w_bar
    EdgeDeadzone,  ///< one deadzone of width w_bar per measurement, summed
    Proportional,  ///< no deadzone; pure consensus-style feedback
};

const char* to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ControllerSpec {
    ControllerKind kind = ControllerKind::NodeDeadzone;
    double gain = 1.0;        ///< k (> 0)
    ThresholdSpec threshold;  ///< deadzone template; width is overridden per law
    double w_bar = 0.0;       ///< assumed per-measurement disturbance bound (>= 0)
};

/// u_i = gain * T_{d(i) w_bar}( sum_j (measurement_ji - D_ji) ): the offset
/// errors are aggregated first, then pushed through one deadzone wide enough
/// to swallow d(i) measurement errors of size w_bar each.
double node_deadzone_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                             const ControllerSpec& spec, const SensingGraph& g);

/// u_i = gain * sum_j T_{w_bar}( measurement_ji - D_ji ): each offset error is
/// thresholded on its own before summing.
double edge_deadzone_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                             const ControllerSpec& spec);

/// u_i = gain * sum_j (measurement_ji - D_ji). With disturbances this drifts:
/// the controls no longer sum to zero.
double proportional_control(int i, const MeasurementSet& meas, const DesiredOffsets& offsets,
                            const ControllerSpec& spec);

/// All n controls at state x and time t under the selected law.
Eigen::VectorXd control_all(const Eigen::VectorXd& x, double t, const SensingGraph& g,
                            const DesiredOffsets& offsets, const EdgeDisturbanceMap& disturbances,
                            const ControllerSpec& spec);

}  // namespace platoonsim
