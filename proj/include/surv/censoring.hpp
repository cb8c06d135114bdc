#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "surv/types.hpp"

namespace surv {

struct RowDiagnostic {
    std::size_t row;
    std::string message;
};

/// Minimum duration in minutes assigned to opens that land on the receive
/// instant, keeping relative deviations and risk sets well defined.
inline constexpr double kDefaultDurationEpsilonMinutes = 0.5;

/// Derives (duration, event) for every log row under the given censoring
/// window (minutes): duration = min(open - receive, window), event iff the
/// open happened strictly inside the window. Rows with non-finite features
/// are dropped and reported through `rejected` when provided.
/// Throws DataError on an empty log.
SurvivalDataset apply_censoring(const RawEventLog& log, double window_minutes,
                                double epsilon_minutes = kDefaultDurationEpsilonMinutes,
                                std::vector<RowDiagnostic>* rejected = nullptr);

/// Number of at-risk individuals |{i : duration_i >= t}| at each distinct
/// event time t.
std::map<double, std::size_t> risk_set_sizes(const SurvivalDataset& ds);

}  // namespace surv
