#include "platoonsim/deadzone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace platoonsim {

namespace {

constexpr double kExactTol = 1e-12;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_widths(double w, double delta_w) {
    if (w < 0.0) throw Error("deadzone half-width must be nonnegative");
    if (!(delta_w > 0.0)) throw Error("ramp transition width must be positive");
}

}  // namespace

const char* to_string(ThresholdKind kind) {
    switch (kind) {
        case ThresholdKind::Hard: return "hard";
        case ThresholdKind::Ramp: return "ramp";
        case ThresholdKind::RampContinuous: return "ramp-continuous";
    }
    return "?";
}

ThresholdKind threshold_kind_from_string(const std::string& name) {
    if (name == "hard") return ThresholdKind::Hard;
    if (name == "ramp") return ThresholdKind::Ramp;
    if (name == "ramp-continuous") return ThresholdKind::RampContinuous;
    throw Error("unknown threshold kind: " + name);
}

double eval_hard(double x, double w) {
    if (w < 0.0) throw Error("deadzone half-width must be nonnegative");
    return std::abs(x) > w ? x : 0.0;
}

double eval_ramp(double x, double w, double delta_w) {
    require_widths(w, delta_w);
    const double ax = std::abs(x);
    if (ax > w + delta_w) return x;
    if (ax <= w) return 0.0;
    return (ax - w) * sgn(x) / delta_w;
}

double eval_ramp_continuous(double x, double w, double delta_w) {
    require_widths(w, delta_w);
    const double ax = std::abs(x);
    if (ax > w + delta_w) return x;
    if (ax <= w) return 0.0;
    return (ax - w) * (w + delta_w) / delta_w * sgn(x);
}

double eval_threshold(const ThresholdSpec& spec, double width, double x) {
    switch (spec.kind) {
        case ThresholdKind::Hard: return eval_hard(x, width);
        case ThresholdKind::Ramp: return eval_ramp(x, width, spec.ramp_width);
        case ThresholdKind::RampContinuous: return eval_ramp_continuous(x, width, spec.ramp_width);
    }
    throw Error("unknown threshold kind");
}

double eval_threshold(const ThresholdSpec& spec, double x) {
    return eval_threshold(spec, spec.width, x);
}

ValidityReport check_threshold_validity(const ThresholdSpec& spec, int samples, double range) {
    if (samples < 2) throw Error("validity check needs at least two samples");
    if (!(range > 0.0)) throw Error("validity check range must be positive");

    ValidityReport report;
    double running_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double x = -range + 2.0 * range * k / (samples - 1);
        const double f = eval_threshold(spec, x);

        // Nondecreasing: each sample may not fall below the running maximum.
        if (f < running_max - kExactTol) {
            const double magnitude = running_max - f;
            if (magnitude > report.worst_monotonicity.magnitude) {
                report.worst_monotonicity = {x, magnitude};
            }
            report.monotone = false;
        }
        running_max = std::max(running_max, f);

        // Zero on the deadzone. The inside test mirrors the evaluators' own
        // branch condition (|x| <= w) so boundary samples cannot be
        // misclassified by floating-point grid placement.
        if (std::abs(x) <= spec.width && std::abs(f) > kExactTol) {
            report.zero_set = false;
            if (std::abs(f) > report.worst_zero_set.magnitude) {
                report.worst_zero_set = {x, std::abs(f)};
            }
        }
    }
    return report;
}

}  // namespace platoonsim
