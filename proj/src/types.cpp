#include "surv/types.hpp"

#include <algorithm>
#include <cmath>

#include "surv/errors.hpp"

namespace surv {

void SurvivalDataset::add_row(std::string id, std::span<const double> features, double duration,
                              bool event) {
    if (features.size() != n_features_) {
        throw DataError("feature count mismatch for row '" + id + "': expected " +
                        std::to_string(n_features_) + ", got " + std::to_string(features.size()));
    }
    ids_.push_back(std::move(id));
    durations_.push_back(duration);
    events_.push_back(event ? 1 : 0);
    features_.insert(features_.end(), features.begin(), features.end());
}

int SurvivalDataset::feature_index(const std::string& name) const {
    auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
    if (it == feature_names_.end()) return -1;
    return static_cast<int>(it - feature_names_.begin());
}

std::size_t SurvivalDataset::n_events() const {
    std::size_t d = 0;
    for (unsigned char e : events_) d += e;
    return d;
}

SurvivalRecord SurvivalDataset::record(std::size_t i) const {
    auto r = row(i);
    return {ids_[i], std::vector<double>(r.begin(), r.end()), durations_[i], events_[i] != 0};
}

SurvivalDataset SurvivalDataset::subset(std::span<const std::size_t> indices) const {
    SurvivalDataset out(feature_names_, censoring_window_);
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.add_row(ids_[i], row(i), durations_[i], events_[i] != 0);
    }
    return out;
}

void SurvivalDataset::validate() const {
    if (censoring_window_ <= 0.0) throw DataError("censoring window must be positive");
    for (std::size_t i = 0; i < size(); ++i) {
        if (durations_[i] < 0.0) {
            throw DataError("row " + std::to_string(i) + ": negative duration");
        }
        if (events_[i] != 0 && durations_[i] >= censoring_window_) {
            throw DataError("row " + std::to_string(i) +
                            ": event duration must lie inside the censoring window");
        }
        if (events_[i] == 0 && durations_[i] != censoring_window_) {
            throw DataError("row " + std::to_string(i) +
                            ": censored duration must equal the censoring window");
        }
        for (double v : row(i)) {
            if (!std::isfinite(v)) {
                throw DataError("row " + std::to_string(i) + ": non-finite feature value");
            }
        }
    }
}

}  // namespace surv
