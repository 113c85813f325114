#pragma once

#include <string>

#include "platoonsim/errors.hpp"

namespace platoonsim {

enum class ThresholdKind {
    Hard,            ///< x if |x| > w, else 0
    Ramp,            ///< discontinuous normalized ramp (see eval_ramp)
    RampContinuous,  ///< continuous ramp joining 0 at w to w+delta_w at w+delta_w
};

const char* to_string(ThresholdKind kind);
ThresholdKind threshold_kind_from_string(const std::string& name);

/// Deadzone threshold template. `width` is the nominal deadzone half-width w;
/// controllers override it per call site (node laws scale it by the agent
/// degree), `ramp_width` is the transition band delta_w used by ramp kinds.
struct ThresholdSpec {
    ThresholdKind kind = ThresholdKind::Hard;
    double width = 0.0;
    double ramp_width = 0.0;
};

/// Hard deadzone: x if |x| > w, else 0.
double eval_hard(double x, double w);

/// Ramp deadzone with a normalized transition band:
///   x                              if |x| >  w + delta_w
///   0                              if |x| <= w
///   (|x| - w) * sgn(x) / delta_w   otherwise.
/// The band rises to 1 at |x| = w + delta_w while the outer branch takes the
/// value w + delta_w there, so unless w + delta_w == 1 the function jumps at
/// the band edge. Kept exactly in this form; check_threshold_validity exists
/// to expose that defect.
double eval_ramp(double x, double w, double delta_w);

/// Continuous repair of eval_ramp: the band interpolates linearly from 0 at
/// |x| = w to w + delta_w at |x| = w + delta_w (slope (w + delta_w)/delta_w),
/// then hands over to the identity.
double eval_ramp_continuous(double x, double w, double delta_w);

/// Dispatches on spec.kind with an explicit half-width (spec.width ignored).
double eval_threshold(const ThresholdSpec& spec, double width, double x);

/// Dispatches on spec.kind using spec.width.
double eval_threshold(const ThresholdSpec& spec, double x);

struct ThresholdViolation {
    double location = 0.0;   ///< grid point where the worst violation occurred
    double magnitude = 0.0;  ///< size of the violation at that point
};

struct ValidityReport {
    bool monotone = true;   ///< f never decreases by more than 1e-12 as x grows
    bool zero_set = true;   ///< f == 0 exactly on |x| <= w (tolerance 1e-12)
    ThresholdViolation worst_monotonicity;  ///< meaningful when !monotone
    ThresholdViolation worst_zero_set;      ///< meaningful when !zero_set

    bool valid() const { return monotone && zero_set; }
};

/// Samples spec on a uniform grid of `samples` points over [-range, range]
/// and checks the two properties a deadzone nonlinearity must satisfy:
/// nondecreasing, and zero exactly on the deadzone. Requires samples >= 2,
/// range > 0. The monotonicity scan compares each sample against the running
/// maximum, so dips that later recover are still caught.
ValidityReport check_threshold_validity(const ThresholdSpec& spec,
                                        int samples = 4001,
                                        double range = 1.0);

}  // namespace platoonsim
