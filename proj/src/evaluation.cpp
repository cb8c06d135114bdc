#include "surv/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "parallel.hpp"
#include "surv/censoring.hpp"
#include "surv/errors.hpp"

namespace surv {

FittedModel fit_model(const ModelSpec& spec, const SurvivalDataset& train) {
    switch (spec.kind) {
        case ModelKind::OpenRate:
            return make_open_rate_baseline(train, spec.open_rate_feature);
        case ModelKind::Regression:
            return RegressionBaselinePair{fit_logistic(train, spec.penalty),
                                          fit_linear_time(train, spec.penalty)};
        case ModelKind::CoxLinear:
            return fit_cox_linear(train, spec.penalty);
        case ModelKind::CoxBoost:
            return fit_cox_boost(train, spec.boost, spec.seed);
        case ModelKind::MixtureCure:
            return fit_mixture_cure(train, spec.mixture);
    }
    throw FitError("unknown model kind");
}

namespace {

StepSurvivalCurve scale_baseline(const StepSurvivalCurve& baseline, double psi) {
    StepSurvivalCurve curve;
    curve.times = baseline.times;
    curve.cum_hazard.resize(baseline.cum_hazard.size());
    curve.survival.resize(baseline.cum_hazard.size());
    for (std::size_t i = 0; i < baseline.cum_hazard.size(); ++i) {
        curve.cum_hazard[i] = baseline.cum_hazard[i] * psi;
        curve.survival[i] = std::exp(-curve.cum_hazard[i]);
    }
    return curve;
}

/// Crossing time of S(t) <= threshold on a hazard-scaled baseline: the
/// first step where H0 * psi >= -log(threshold), clamped to the window.
double crossing_time(const StepSurvivalCurve& baseline, double psi, double threshold,
                     double window) {
    if (threshold <= 0.0) return window;
    double target = -std::log(threshold) / psi;
    double t = baseline.time_of_cum_hazard(target);
    return t <= window ? t : window;
}

}  // namespace

StepSurvivalCurve individual_survivor(const CoxLinearModel& model,
                                      std::span<const double> raw_x) {
    return scale_baseline(model.baseline, model.relative_hazard(raw_x));
}

StepSurvivalCurve individual_survivor(const CoxBoostModel& model, std::span<const double> raw_x) {
    return scale_baseline(model.baseline, relative_hazard(model, raw_x));
}

StepSurvivalCurve individual_survivor(const MixtureCureModel& model,
                                      std::span<const double> raw_x,
                                      std::span<const double> raw_z) {
    double pi = model.incidence_probability(raw_z);
    double psi = model.latency_relative_hazard(raw_x);
    StepSurvivalCurve curve;
    curve.times = model.baseline.times;
    curve.survival.resize(curve.times.size());
    curve.cum_hazard.resize(curve.times.size());
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        double latency = std::exp(-model.baseline.cum_hazard[i] * psi);
        double s = mixture_survivor(pi, latency);
        curve.survival[i] = s;
        curve.cum_hazard[i] = -std::log(s);
    }
    return curve;
}

double predict_time_percentile(const StepSurvivalCurve& curve, double percentile, double window) {
    double threshold = 1.0 - percentile / 100.0;
    // first step where the curve is no longer above the threshold
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        if (curve.times[i] > window) break;
        if (curve.survival[i] <= threshold) return curve.times[i];
    }
    return window;
}

double auc(std::span<const double> scores, std::span<const unsigned char> labels) {
    if (scores.size() != labels.size()) throw DataError("scores/labels length mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over ties, summed for the positive class
    double positive_rank_sum = 0.0;
    std::size_t n_positive = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        for (std::size_t p = i; p < j; ++p) {
            if (labels[order[p]]) {
                positive_rank_sum += midrank;
                ++n_positive;
            }
        }
        i = j;
    }
    std::size_t n_negative = n - n_positive;
    if (n_positive == 0 || n_negative == 0) {
        throw FitError("AUC needs both classes present");
    }
    double u = positive_rank_sum -
               static_cast<double>(n_positive) * (static_cast<double>(n_positive) + 1.0) / 2.0;
    return u / (static_cast<double>(n_positive) * static_cast<double>(n_negative));
}

double mrad(std::span<const double> actual, std::span<const double> predicted, MradMode mode,
            std::span<const unsigned char> events) {
    if (actual.size() != predicted.size() || actual.size() != events.size()) {
        throw DataError("mrad inputs must have equal length");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (mode == MradMode::ObservedOnly && !events[i]) continue;
        sum += std::fabs(actual[i] - predicted[i]) / actual[i];
        ++count;
    }
    if (count == 0) throw FitError("MRAD over an empty selection");
    return sum / static_cast<double>(count);
}

std::vector<PredictionRow> score_dataset(const FittedModel& model, const SurvivalDataset& ds,
                                         std::span<const double> percentiles) {
    const double window = ds.censoring_window();
    std::vector<PredictionRow> rows(ds.size());

    auto fill_constant_times = [&](PredictionRow& row, double minutes) {
        row.t_hat.assign(percentiles.size(), minutes);
    };

    for (std::size_t i = 0; i < ds.size(); ++i) {
        rows[i].individual_id = ds.id(i);
        rows[i].actual_duration = ds.duration(i);
        rows[i].actual_event = ds.event(i);
    }

    std::function<void(std::size_t)> score_row;
    if (const auto* baseline = std::get_if<BaselineModel>(&model)) {
        score_row = [&, baseline](std::size_t i) {
            auto prediction = predict_baseline(*baseline, ds.record(i), ds.feature_names());
            rows[i].open_probability_at_window = prediction.open_probability;
            fill_constant_times(rows[i], prediction.predicted_minutes);
        };
    } else if (const auto* pair = std::get_if<RegressionBaselinePair>(&model)) {
        score_row = [&, pair](std::size_t i) {
            auto record = ds.record(i);
            auto classify = predict_baseline(pair->classifier, record, ds.feature_names());
            auto when = predict_baseline(pair->time, record, ds.feature_names());
            rows[i].open_probability_at_window = classify.open_probability;
            fill_constant_times(rows[i], when.predicted_minutes);
        };
    } else if (const auto* cox = std::get_if<CoxLinearModel>(&model)) {
        double h_window = cox->baseline.cum_hazard_at(window);
        score_row = [&, cox, h_window](std::size_t i) {
            double psi = cox->relative_hazard(ds.row(i));
            rows[i].open_probability_at_window = -std::expm1(-h_window * psi);
            rows[i].t_hat.resize(percentiles.size());
            for (std::size_t p = 0; p < percentiles.size(); ++p) {
                rows[i].t_hat[p] =
                    crossing_time(cox->baseline, psi, 1.0 - percentiles[p] / 100.0, window);
            }
        };
    } else if (const auto* boost = std::get_if<CoxBoostModel>(&model)) {
        double h_window = boost->baseline.cum_hazard_at(window);
        score_row = [&, boost, h_window](std::size_t i) {
            double psi = relative_hazard(*boost, ds.row(i));
            rows[i].open_probability_at_window = -std::expm1(-h_window * psi);
            rows[i].t_hat.resize(percentiles.size());
            for (std::size_t p = 0; p < percentiles.size(); ++p) {
                rows[i].t_hat[p] =
                    crossing_time(boost->baseline, psi, 1.0 - percentiles[p] / 100.0, window);
            }
        };
    } else if (const auto* mixture = std::get_if<MixtureCureModel>(&model)) {
        double h_window = mixture->baseline.cum_hazard_at(window);
        score_row = [&, mixture, h_window](std::size_t i) {
            auto row = ds.row(i);
            double pi = mixture->incidence_probability(
                mixture->incidence_row(row, ds.feature_names()));
            double psi = mixture->latency_relative_hazard(row);
            rows[i].open_probability_at_window = pi * (-std::expm1(-h_window * psi));
            rows[i].t_hat.resize(percentiles.size());
            for (std::size_t p = 0; p < percentiles.size(); ++p) {
                double threshold = 1.0 - percentiles[p] / 100.0;
                // mixture floor: the curve can only reach 1 - pi
                double latency_threshold = (threshold - (1.0 - pi)) / pi;
                rows[i].t_hat[p] =
                    crossing_time(mixture->baseline, psi, latency_threshold, window);
            }
        };
    } else {
        throw FitError("unknown fitted model variant");
    }

    detail::parallel_for(ds.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) score_row(i);
    });
    return rows;
}

namespace {

struct Metrics {
    double auc;
    std::vector<double> mrad_a;
    std::vector<double> mrad_o;
    std::size_t n_observed;
    std::size_t n_censored;
};

Metrics compute_metrics(const std::vector<PredictionRow>& rows, std::size_t n_percentiles) {
    Metrics m{};
    std::vector<double> scores(rows.size());
    std::vector<unsigned char> labels(rows.size());
    std::vector<double> actual(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        scores[i] = rows[i].open_probability_at_window;
        labels[i] = rows[i].actual_event ? 1 : 0;
        actual[i] = rows[i].actual_duration;
        if (rows[i].actual_event) {
            ++m.n_observed;
        } else {
            ++m.n_censored;
        }
    }
    m.auc = auc(scores, labels);

    std::vector<double> predicted(rows.size());
    for (std::size_t p = 0; p < n_percentiles; ++p) {
        for (std::size_t i = 0; i < rows.size(); ++i) predicted[i] = rows[i].t_hat[p];
        m.mrad_a.push_back(mrad(actual, predicted, MradMode::AllRows, labels));
        m.mrad_o.push_back(mrad(actual, predicted, MradMode::ObservedOnly, labels));
    }
    return m;
}

}  // namespace

EvaluationReport evaluate(std::span<const ModelSpec> specs, const RawEventLog& train,
                          const RawEventLog& validate, const EvaluateOptions& options) {
    EvaluationReport report;
    report.metadata["mrad_a_censored_actual"] = "censoring_window";
    report.metadata["model_selection"] = "auc";

    for (double window : options.windows) {
        SurvivalDataset train_ds = apply_censoring(train, window, options.epsilon_minutes);
        SurvivalDataset validate_ds = apply_censoring(validate, window, options.epsilon_minutes);
        for (const ModelSpec& spec : specs) {
            std::vector<EvaluationEntry> entries;
            try {
                FittedModel model = fit_model(spec, train_ds);
                auto rows = score_dataset(model, validate_ds, options.percentiles);
                Metrics m = compute_metrics(rows, options.percentiles.size());
                for (std::size_t p = 0; p < options.percentiles.size(); ++p) {
                    EvaluationEntry e;
                    e.model = spec.name;
                    e.window_minutes = window;
                    e.percentile = options.percentiles[p];
                    e.auc = m.auc;
                    e.mrad_a = m.mrad_a[p];
                    e.mrad_o = m.mrad_o[p];
                    e.n_observed = m.n_observed;
                    e.n_censored = m.n_censored;
                    entries.push_back(std::move(e));
                }
            } catch (const std::exception& ex) {
                entries.clear();
                for (double percentile : options.percentiles) {
                    EvaluationEntry e;
                    e.model = spec.name;
                    e.window_minutes = window;
                    e.percentile = percentile;
                    e.failed = true;
                    e.error = ex.what();
                    entries.push_back(std::move(e));
                }
                report.any_failures = true;
            }
            for (auto& e : entries) report.entries.push_back(std::move(e));
        }
    }
    return report;
}

BootstrapEntry bootstrap_stability(
    const ModelSpec& spec, const SurvivalDataset& train, const SurvivalDataset& validate,
    double percentile, int n, std::uint64_t seed,
    const std::function<std::vector<std::size_t>(std::size_t, std::uint64_t)>& sampler) {
    if (n < 2) throw FitError("bootstrap needs at least 2 samples");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
    auto default_sampler = [&](std::size_t size) {
        std::vector<std::size_t> indices(size);
        for (auto& idx : indices) idx = pick(rng);
        return indices;
    };

    const std::vector<double> percentiles{percentile};
    std::vector<double> aucs;
    std::vector<double> mrads;
    for (int s = 0; s < n; ++s) {
        std::vector<std::size_t> indices;
        for (int attempt = 0; attempt < 100; ++attempt) {
            indices = sampler ? sampler(train.size(), static_cast<std::uint64_t>(s))
                              : default_sampler(train.size());
            std::size_t events = 0;
            for (std::size_t i : indices) events += train.event(i) ? 1 : 0;
            if (events > 0) break;
            indices.clear();
        }
        if (indices.empty()) throw FitError("bootstrap could not draw a sample with events");

        SurvivalDataset sample = train.subset(indices);
        FittedModel model = fit_model(spec, sample);
        auto rows = score_dataset(model, validate, percentiles);
        Metrics m = compute_metrics(rows, 1);
        aucs.push_back(m.auc);
        mrads.push_back(m.mrad_o[0]);
    }

    auto mean_std = [](const std::vector<double>& values) {
        bool all_equal = std::all_of(values.begin(), values.end(),
                                     [&](double v) { return v == values.front(); });
        if (all_equal) return MeanStd{values.front(), 0.0};
        double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        double stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        return MeanStd{mean, stddev};
    };

    BootstrapEntry entry;
    entry.model = spec.name;
    entry.window_minutes = train.censoring_window();
    entry.percentile = percentile;
    entry.n_samples = n;
    entry.auc = mean_std(aucs);
    entry.mrad_o = mean_std(mrads);
    return entry;
}

void save_report_csv(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "model,window_minutes,percentile,auc,mrad_a,mrad_o,n_observed,n_censored,status\n";
    char buf[512];
    for (const auto& e : report.entries) {
        if (e.failed) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,,,,,,failed\n", e.model.c_str(),
                          e.window_minutes, e.percentile);
        } else {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu,ok\n",
                          e.model.c_str(), e.window_minutes, e.percentile, e.auc, e.mrad_a,
                          e.mrad_o, e.n_observed, e.n_censored);
        }
        out << buf;
    }
}

}  // namespace surv
