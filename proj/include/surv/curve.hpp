#pragma once

#include <cstddef>
#include <vector>

namespace surv {

/// Right-continuous step survivor curve S(t) with its paired cumulative
/// hazard H(t). Steps sit at strictly increasing event times; between steps
/// the value is the one after the last step at or before t, and before the
/// first step S = 1, H = 0.
struct StepSurvivalCurve {
    std::vector<double> times;
    std::vector<double> survival;
    std::vector<double> cum_hazard;

    std::size_t n_steps() const { return times.size(); }

    double survival_at(double t) const;
    double cum_hazard_at(double t) const;

    /// Index of the last step with times[k] <= t, or -1 when t precedes
    /// every step.
    int step_index(double t) const;

    /// First step time where the cumulative hazard reaches `target`,
    /// or +infinity when it never does.
    double time_of_cum_hazard(double target) const;

    /// Builds the survival column as exp(-H) from steps of a cumulative
    /// hazard.
    static StepSurvivalCurve from_cum_hazard(std::vector<double> times,
                                             std::vector<double> cum_hazard);

    /// Throws DataError when monotonicity or range invariants are broken.
    void validate() const;
};

}  // namespace surv
