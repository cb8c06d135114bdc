#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace surv {

/// One raw row of an email event log: when the message reached the
/// recipient, when (if ever) it was opened, and the feature snapshot
/// taken at send time. Timestamps are epoch seconds.
struct RawEventRow {
    std::string individual_id;
    double receive_ts = 0.0;
    std::optional<double> open_ts;
    std::vector<double> features;
};

struct RawEventLog {
    std::vector<std::string> feature_names;
    std::vector<RawEventRow> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

/// One censored observation: the duration is min(time-to-open, window)
/// in minutes and `event` says whether the open was seen inside the window.
struct SurvivalRecord {
    std::string individual_id;
    std::vector<double> features;
    double duration = 0.0;
    bool event = false;
};

/// Column-oriented collection of censored observations sharing one
/// censoring window. Immutable once built; fitters and estimators only read.
class SurvivalDataset {
public:
    SurvivalDataset() = default;
    SurvivalDataset(std::vector<std::string> feature_names, double censoring_window_minutes)
        : feature_names_(std::move(feature_names)),
          censoring_window_(censoring_window_minutes),
          n_features_(feature_names_.size()) {}

    void reserve(std::size_t n) {
        ids_.reserve(n);
        durations_.reserve(n);
        events_.reserve(n);
        features_.reserve(n * n_features_);
    }

    void add_row(std::string id, std::span<const double> features, double duration, bool event);

    std::size_t size() const { return durations_.size(); }
    bool empty() const { return durations_.empty(); }
    std::size_t n_features() const { return n_features_; }
    double censoring_window() const { return censoring_window_; }

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<double>& durations() const { return durations_; }
    const std::vector<unsigned char>& events() const { return events_; }

    double duration(std::size_t i) const { return durations_[i]; }
    bool event(std::size_t i) const { return events_[i] != 0; }
    const std::string& id(std::size_t i) const { return ids_[i]; }

    /// Feature row i as a contiguous view.
    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * n_features_, n_features_};
    }

    /// Index of a named feature column, or -1.
    int feature_index(const std::string& name) const;

    std::size_t n_events() const;

    SurvivalRecord record(std::size_t i) const;

    /// Subset by row indices (duplicates allowed; used by the bootstrap).
    SurvivalDataset subset(std::span<const std::size_t> indices) const;

    /// Throws DataError if any documented invariant is broken.
    void validate() const;

private:
    std::vector<std::string> feature_names_;
    double censoring_window_ = 0.0;
    std::size_t n_features_ = 0;
    std::vector<std::string> ids_;
    std::vector<double> durations_;
    std::vector<unsigned char> events_;
    std::vector<double> features_;  // row-major, size() * n_features_
};

}  // namespace surv
