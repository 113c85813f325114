#include "platoonsim/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoonsim/rng.hpp"

namespace platoonsim {

const char* to_string(DisturbanceSpec::Kind kind) {
    switch (kind) {
        case DisturbanceSpec::Kind::Zero: return "zero";
        case DisturbanceSpec::Kind::Constant: return "constant";
        case DisturbanceSpec::Kind::Pulse: return "pulse";
        case DisturbanceSpec::Kind::UniformRandom: return "uniform_random";
    }
    return "?";
}

DisturbanceSpec DisturbanceSpec::zero() { return DisturbanceSpec{}; }

DisturbanceSpec DisturbanceSpec::constant(double value) {
    DisturbanceSpec s;
    s.kind_ = Kind::Constant;
    s.value_ = value;
    return s;
}

DisturbanceSpec DisturbanceSpec::pulse(const PulseSpec& p) {
    if (!(p.period > 0.0)) throw Error("pulse period must be positive");
    if (!(p.pulse_width > 0.0) || p.pulse_width > p.period) {
        throw Error("pulse width must lie in (0, period]");
    }
    if (p.phase_delay < 0.0) throw Error("pulse phase delay must be nonnegative");
    DisturbanceSpec s;
    s.kind_ = Kind::Pulse;
    s.pulse_ = p;
    return s;
}

DisturbanceSpec DisturbanceSpec::uniform_random(double amplitude, std::uint64_t seed,
                                                double hold_time) {
    if (amplitude < 0.0) throw Error("uniform_random amplitude must be nonnegative");
    if (!(hold_time > 0.0)) throw Error("uniform_random hold time must be positive");
    DisturbanceSpec s;
    s.kind_ = Kind::UniformRandom;
    s.amplitude_ = amplitude;
    s.seed_ = seed;
    s.hold_ = hold_time;
    return s;
}

double DisturbanceSpec::sample(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return value_;
        case Kind::Pulse: {
            double phase = std::fmod(t - pulse_.phase_delay, pulse_.period);
            if (phase < 0.0) phase += pulse_.period;
            return (phase < pulse_.pulse_width) ? pulse_.bias + pulse_.magnitude : pulse_.bias;
        }
        case Kind::UniformRandom: {
            // Value depends only on the hold window index, never on how often
            // it is sampled, so refining dt leaves the signal unchanged.
            const auto window = static_cast<std::uint64_t>(std::max(0.0, std::floor(t / hold_)));
            SplitMix64 g(mix_seed(seed_, window));
            return (2.0 * g.next_double() - 1.0) * amplitude_;
        }
    }
    return 0.0;
}

double DisturbanceSpec::max_abs_bound() const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return std::abs(value_);
        case Kind::Pulse:
            return std::max(std::abs(pulse_.bias), std::abs(pulse_.bias + pulse_.magnitude));
        case Kind::UniformRandom: return amplitude_;
    }
    return 0.0;
}

void EdgeDisturbanceMap::set(int j, int i, DisturbanceSpec spec) {
    if (i == j) throw Error("a disturbance edge needs two distinct agents");
    map_[{j, i}] = std::move(spec);
}

const DisturbanceSpec& EdgeDisturbanceMap::get(int j, int i) const {
    static const DisturbanceSpec zero_spec{};
    auto it = map_.find({j, i});
    return it == map_.end() ? zero_spec : it->second;
}

void EdgeDisturbanceMap::validate_edges(const SensingGraph& g) const {
    for (const auto& [edge, spec] : map_) {
        if (!g.has_edge(edge.first, edge.second)) {
            std::ostringstream os;
            os << "disturbance on (" << (edge.first + 1) << ", " << (edge.second + 1)
               << ") does not correspond to a sensing edge";
            throw Error(os.str());
        }
    }
}

std::vector<BoundWarning> disturbance_bound_warnings(const EdgeDisturbanceMap& map, double w_bar) {
    std::vector<BoundWarning> warnings;
    for (const auto& [edge, spec] : map.entries()) {
        const double bound = spec.max_abs_bound();
        if (bound > w_bar + 1e-12) {
            warnings.push_back({edge.first, edge.second, bound, w_bar});
        }
    }
    return warnings;
}

EdgeDisturbanceMap benchmark_platoon_disturbances() {
    const PulseSpec low{0.1, -0.09, 2.0, 1.0, 0.0};       // peaks at +0.01
    const PulseSpec high{0.1, 0.01, 2.0, 1.0, 0.0};       // peaks at +0.11
    const PulseSpec high_delayed{0.1, 0.01, 2.0, 1.0, 1.0};

    EdgeDisturbanceMap map;
    map.set(1, 0, DisturbanceSpec::zero());              // w_21
    map.set(4, 5, DisturbanceSpec::zero());              // w_56
    map.set(0, 1, DisturbanceSpec::pulse(low));          // w_12
    map.set(1, 2, DisturbanceSpec::pulse(low));          // w_23
    map.set(2, 3, DisturbanceSpec::pulse(low));          // w_34
    map.set(3, 4, DisturbanceSpec::pulse(low));          // w_45
    map.set(2, 1, DisturbanceSpec::pulse(high_delayed)); // w_32
    map.set(3, 2, DisturbanceSpec::pulse(high));         // w_43
    map.set(4, 3, DisturbanceSpec::pulse(high));         // w_54
    map.set(5, 4, DisturbanceSpec::pulse(high));         // w_65
    return map;
}

}  // namespace platoonsim
