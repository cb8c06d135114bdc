#include "surv/censoring.hpp"

#include <algorithm>
#include <cmath>

#include "surv/errors.hpp"

namespace surv {

SurvivalDataset apply_censoring(const RawEventLog& log, double window_minutes,
                                double epsilon_minutes, std::vector<RowDiagnostic>* rejected) {
    if (window_minutes <= 0.0) throw DataError("censoring window must be positive");
    if (log.empty()) throw DataError("cannot censor an empty event log");

    SurvivalDataset ds(log.feature_names, window_minutes);
    ds.reserve(log.rows.size());
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
        const RawEventRow& r = log.rows[i];
        bool bad = false;
        for (double v : r.features) {
            if (!std::isfinite(v)) {
                bad = true;
                break;
            }
        }
        if (bad || r.features.size() != log.feature_names.size()) {
            if (rejected) {
                rejected->push_back({i, bad ? "non-finite feature value" : "feature count mismatch"});
            }
            continue;
        }

        double duration = window_minutes;
        bool event = false;
        if (r.open_ts) {
            double minutes = (*r.open_ts - r.receive_ts) / 60.0;
            if (minutes < window_minutes) {
                event = true;
                duration = std::max(minutes, epsilon_minutes);
            }
        }
        ds.add_row(r.individual_id, r.features, duration, event);
    }
    if (ds.empty()) throw DataError("all rows were rejected during censoring");
    return ds;
}

std::map<double, std::size_t> risk_set_sizes(const SurvivalDataset& ds) {
    if (ds.empty()) throw DataError("risk sets of an empty dataset");
    std::vector<double> sorted(ds.durations());
    std::sort(sorted.begin(), sorted.end());

    std::map<double, std::size_t> sizes;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds.event(i)) continue;
        double t = ds.duration(i);
        if (sizes.count(t)) continue;
        // rows with duration >= t are still at risk
        auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
        sizes[t] = static_cast<std::size_t>(sorted.end() - it);
    }
    return sizes;
}

}  // namespace surv
