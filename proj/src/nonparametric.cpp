#include "surv/nonparametric.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "surv/errors.hpp"
#include "surv/special.hpp"

namespace surv {

namespace {

// (duration, event) pairs sorted by time ascending.
std::vector<std::pair<double, bool>> sorted_outcomes(const SurvivalDataset& ds) {
    std::vector<std::pair<double, bool>> rows(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) rows[i] = {ds.duration(i), ds.event(i)};
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

}  // namespace

StepSurvivalCurve kaplan_meier(const SurvivalDataset& ds) {
    if (ds.empty()) throw DataError("Kaplan-Meier of an empty dataset");
    auto rows = sorted_outcomes(ds);

    StepSurvivalCurve curve;
    double s = 1.0;
    std::size_t i = 0;
    const std::size_t n = rows.size();
    while (i < n) {
        double t = rows[i].first;
        std::size_t at_risk = n - i;
        std::size_t d = 0;
        std::size_t j = i;
        while (j < n && rows[j].first == t) {
            if (rows[j].second) ++d;
            ++j;
        }
        if (d > 0) {
            s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
            curve.times.push_back(t);
            curve.survival.push_back(s);
            curve.cum_hazard.push_back(s > 0.0 ? -std::log(s)
                                               : std::numeric_limits<double>::infinity());
        }
        i = j;
    }
    if (curve.times.empty()) {
        std::cerr << "warning: Kaplan-Meier saw no events; survivor curve is flat at 1\n";
    }
    return curve;
}

namespace {

StepSurvivalCurve breslow_impl(const SurvivalDataset& ds, std::span<const double> psi,
                               std::span<const double> weights) {
    if (ds.empty()) throw DataError("Breslow baseline of an empty dataset");
    if (psi.size() != ds.size()) throw DataError("relative hazards not aligned with dataset");
    for (double p : psi) {
        if (!(p > 0.0)) throw DataError("relative hazards must be positive");
    }

    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds.duration(a) < ds.duration(b);
    });

    // suffix sums of w * psi give each risk-set denominator
    auto wpsi = [&](std::size_t i) { return (weights.empty() ? 1.0 : weights[i]) * psi[i]; };

    std::vector<double> times;
    std::vector<double> hazard;
    const std::size_t n = order.size();
    // denominator at the current time: start from the full sum, peel off
    // rows as they leave the risk set
    double denom = 0.0;
    for (std::size_t i : order) denom += wpsi(i);

    double h = 0.0;
    std::size_t i = 0;
    while (i < n) {
        double t = ds.duration(order[i]);
        double d = 0.0;
        std::size_t j = i;
        double leaving = 0.0;
        while (j < n && ds.duration(order[j]) == t) {
            if (ds.event(order[j])) d += weights.empty() ? 1.0 : weights[order[j]];
            leaving += wpsi(order[j]);
            ++j;
        }
        if (d > 0.0) {
            h += d / denom;
            times.push_back(t);
            hazard.push_back(h);
        }
        denom -= leaving;
        i = j;
    }
    return StepSurvivalCurve::from_cum_hazard(std::move(times), std::move(hazard));
}

}  // namespace

StepSurvivalCurve breslow_baseline(const SurvivalDataset& ds,
                                   std::span<const double> relative_hazards) {
    return breslow_impl(ds, relative_hazards, {});
}

StepSurvivalCurve breslow_baseline_weighted(const SurvivalDataset& ds,
                                            std::span<const double> relative_hazards,
                                            std::span<const double> weights) {
    if (weights.size() != ds.size()) throw DataError("weights not aligned with dataset");
    return breslow_impl(ds, relative_hazards, weights);
}

LogRankResult log_rank_test(const SurvivalDataset& group_a, const SurvivalDataset& group_b) {
    if (group_a.empty() || group_b.empty()) throw DataError("log-rank groups must be non-empty");
    if (group_a.censoring_window() != group_b.censoring_window()) {
        throw DataError("log-rank groups must share a censoring window");
    }
    if (group_a.n_events() + group_b.n_events() == 0) {
        throw DataError("log-rank needs at least one event across the groups");
    }

    auto a = sorted_outcomes(group_a);
    auto b = sorted_outcomes(group_b);

    // pooled distinct event times
    std::vector<double> event_times;
    for (const auto& r : a) {
        if (r.second) event_times.push_back(r.first);
    }
    for (const auto& r : b) {
        if (r.second) event_times.push_back(r.first);
    }
    std::sort(event_times.begin(), event_times.end());
    event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());

    auto at_risk = [](const std::vector<std::pair<double, bool>>& rows, double t) {
        auto it = std::lower_bound(rows.begin(), rows.end(), t,
                                   [](const auto& r, double v) { return r.first < v; });
        return static_cast<double>(rows.end() - it);
    };
    auto events_at = [](const std::vector<std::pair<double, bool>>& rows, double t) {
        double d = 0.0;
        auto it = std::lower_bound(rows.begin(), rows.end(), t,
                                   [](const auto& r, double v) { return r.first < v; });
        while (it != rows.end() && it->first == t) {
            if (it->second) d += 1.0;
            ++it;
        }
        return d;
    };

    double observed_a = 0.0;
    double expected_a = 0.0;
    double variance = 0.0;
    for (double t : event_times) {
        double n1 = at_risk(a, t);
        double n2 = at_risk(b, t);
        double n = n1 + n2;
        if (n < 2.0) continue;
        double d1 = events_at(a, t);
        double d = d1 + events_at(b, t);
        observed_a += d1;
        expected_a += d * n1 / n;
        variance += d * (n1 / n) * (n2 / n) * (n - d) / (n - 1.0);
    }

    double diff = observed_a - expected_a;
    double statistic = variance > 0.0 ? diff * diff / variance : 0.0;
    return {statistic, chi_square_sf(statistic, 1.0)};
}

}  // namespace surv
