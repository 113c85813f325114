#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "platoonsim/errors.hpp"
#include "platoonsim/graph.hpp"

namespace platoonsim {

/// Periodic rectangular pulse: value is bias + magnitude while the pulse is
/// active (the first pulse_width seconds of each period, shifted right by
/// phase_delay) and bias otherwise.
struct PulseSpec {
    double magnitude = 0.0;
    double bias = 0.0;
    double period = 1.0;
    double pulse_width = 1.0;
    double phase_delay = 0.0;
};

/// Deterministic scalar disturbance signal w(t) attached to one directed
/// measurement. Evaluation is a pure function of t: the uniform_random kind
/// rederives its value from (seed, floor(t / hold_time)), so integration
/// step size never changes the signal.
class DisturbanceSpec {
public:
    enum class Kind { Zero, Constant, Pulse, UniformRandom };

    DisturbanceSpec() = default;  // zero

    static DisturbanceSpec zero();
    static DisturbanceSpec constant(double value);
    /// Validates period > 0, 0 < pulse_width <= period, phase_delay >= 0.
    static DisturbanceSpec pulse(const PulseSpec& p);
    /// Piecewise-constant noise, resampled uniformly from [-amplitude,
    /// amplitude] every hold_time seconds. Validates amplitude >= 0,
    /// hold_time > 0.
    static DisturbanceSpec uniform_random(double amplitude, std::uint64_t seed,
                                          double hold_time);

    Kind kind() const { return kind_; }
    double sample(double t) const;
    /// Exact bound on sup_t |sample(t)|.
    double max_abs_bound() const;

    // Accessors for serialization; only meaningful for the matching kind.
    double constant_value() const { return value_; }
    const PulseSpec& pulse_spec() const { return pulse_; }
    double amplitude() const { return amplitude_; }
    std::uint64_t seed() const { return seed_; }
    double hold_time() const { return hold_; }

private:
    Kind kind_ = Kind::Zero;
    double value_ = 0.0;
    PulseSpec pulse_{};
    double amplitude_ = 0.0;
    std::uint64_t seed_ = 0;
    double hold_ = 1.0;
};

const char* to_string(DisturbanceSpec::Kind kind);

/// Disturbance signals keyed by directed measurement edge (j, i): the error
/// agent i incurs when observing agent j. Unspecified edges read as zero.
class EdgeDisturbanceMap {
public:
    void set(int j, int i, DisturbanceSpec spec);
    const DisturbanceSpec& get(int j, int i) const;
    std::size_t specified_count() const { return map_.size(); }
    const std::map<std::pair<int, int>, DisturbanceSpec>& entries() const { return map_; }

    /// Throws Error if any key (j, i) is not a directed edge of g.
    void validate_edges(const SensingGraph& g) const;

private:
    std::map<std::pair<int, int>, DisturbanceSpec> map_;  // key (j, i)
};

/// One directed disturbance whose worst-case magnitude exceeds the bound the
/// controller was told to assume. Reported at load time as a warning, never
/// an error: running a controller outside its assumptions is a legitimate
/// experiment (it is exactly how the oscillating regime is produced).
struct BoundWarning {
    int j = 0;  ///< 0-based directed edge (j observed by i)
    int i = 0;
    double bound = 0.0;  ///< sup_t |w_ji(t)|
    double w_bar = 0.0;  ///< assumed disturbance bound
};

std::vector<BoundWarning> disturbance_bound_warnings(const EdgeDisturbanceMap& map,
                                                     double w_bar);

/// The ten directed disturbance signals of the benchmark six-agent platoon
/// runs (0-based keys): w_21 and w_56 zero; w_12, w_23, w_34, w_45 pulses with
/// bias -0.09; w_43, w_54, w_65 pulses with bias +0.01; w_32 the same
/// +0.01-bias pulse delayed by one second. All magnitudes 0.1, period 2,
/// width 1.
EdgeDisturbanceMap benchmark_platoon_disturbances();

}  // namespace platoonsim
