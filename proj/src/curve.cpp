#include "surv/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surv/errors.hpp"

namespace surv {

int StepSurvivalCurve::step_index(double t) const {
    // last step with times[k] <= t
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<int>(it - times.begin()) - 1;
}

double StepSurvivalCurve::survival_at(double t) const {
    int k = step_index(t);
    return k < 0 ? 1.0 : survival[static_cast<std::size_t>(k)];
}

double StepSurvivalCurve::cum_hazard_at(double t) const {
    int k = step_index(t);
    return k < 0 ? 0.0 : cum_hazard[static_cast<std::size_t>(k)];
}

double StepSurvivalCurve::time_of_cum_hazard(double target) const {
    auto it = std::lower_bound(cum_hazard.begin(), cum_hazard.end(), target);
    if (it == cum_hazard.end()) return std::numeric_limits<double>::infinity();
    return times[static_cast<std::size_t>(it - cum_hazard.begin())];
}

StepSurvivalCurve StepSurvivalCurve::from_cum_hazard(std::vector<double> times,
                                                     std::vector<double> cum_hazard) {
    StepSurvivalCurve curve;
    curve.survival.resize(cum_hazard.size());
    for (std::size_t i = 0; i < cum_hazard.size(); ++i) {
        curve.survival[i] = std::exp(-cum_hazard[i]);
    }
    curve.times = std::move(times);
    curve.cum_hazard = std::move(cum_hazard);
    return curve;
}

void StepSurvivalCurve::validate() const {
    if (times.size() != survival.size() || times.size() != cum_hazard.size()) {
        throw DataError("survival curve columns have mismatched lengths");
    }
    double prev_t = -std::numeric_limits<double>::infinity();
    double prev_s = 1.0;
    double prev_h = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= prev_t) throw DataError("curve times must be strictly increasing");
        if (survival[i] < 0.0 || survival[i] > prev_s) {
            throw DataError("survivor values must be non-increasing in [0, 1]");
        }
        if (cum_hazard[i] < prev_h) throw DataError("cumulative hazard must be non-decreasing");
        prev_t = times[i];
        prev_s = survival[i];
        prev_h = cum_hazard[i];
    }
}

}  // namespace surv
