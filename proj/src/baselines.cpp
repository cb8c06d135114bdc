#include "surv/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "glm_internal.hpp"
#include "surv/errors.hpp"

namespace surv {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double linear_score(const BaselineModel& model, std::span<const double> raw) {
    double eta = model.coefficients[0];
    for (std::size_t j = 0; j < model.scaler.size(); ++j) {
        eta += model.coefficients[j + 1] * (raw[j] - model.scaler.mean[j]) / model.scaler.scale[j];
    }
    return eta;
}

}  // namespace

BaselineModel fit_logistic(const SurvivalDataset& ds, const ElasticNetPenalty& penalty,
                           const NewtonConfig& config) {
    if (ds.empty()) throw FitError("cannot fit on an empty dataset");
    std::size_t d = ds.n_events();
    if (d == 0 || d == ds.size()) {
        throw FitError("logistic baseline needs both classes present");
    }

    BaselineModel model;
    model.variant = BaselineVariant::Logistic;
    model.feature_names = ds.feature_names();
    model.scaler = FeatureScaler::fit(ds);
    model.penalty = penalty;
    model.constant_minutes = ds.censoring_window();

    std::vector<double> xstd = model.scaler.apply_all(ds);
    std::vector<double> y(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) y[i] = ds.event(i) ? 1.0 : 0.0;

    detail::GlmDesign design{&xstd, ds.size(), ds.n_features()};
    auto fit = detail::fit_logistic_fractional(design, y, penalty, config);
    model.coefficients = std::move(fit.coef);
    model.iterations = fit.iterations;
    return model;
}

BaselineModel fit_linear_time(const SurvivalDataset& ds, const ElasticNetPenalty& penalty,
                              bool log_time, const NewtonConfig& config) {
    std::vector<std::size_t> event_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.event(i)) event_rows.push_back(i);
    }
    if (event_rows.size() < 2) {
        throw FitError("linear time baseline needs at least 2 event rows");
    }

    SurvivalDataset events = ds.subset(event_rows);

    BaselineModel model;
    model.variant = BaselineVariant::Linear;
    model.feature_names = ds.feature_names();
    model.scaler = FeatureScaler::fit(events);
    model.penalty = penalty;
    model.constant_minutes = ds.censoring_window();
    model.log_time = log_time;

    std::vector<double> xstd = model.scaler.apply_all(events);
    std::vector<double> y(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        y[i] = log_time ? std::log(events.duration(i)) : events.duration(i);
    }

    detail::GlmDesign design{&xstd, events.size(), events.n_features()};
    model.coefficients = detail::fit_least_squares(design, y, penalty, config);
    return model;
}

BaselineModel make_open_rate_baseline(const SurvivalDataset& ds,
                                      const std::string& open_rate_feature) {
    if (ds.feature_index(open_rate_feature) < 0) {
        throw FitError("open-rate baseline needs feature '" + open_rate_feature + "'");
    }
    BaselineModel model;
    model.variant = BaselineVariant::OpenRate;
    model.feature_names = ds.feature_names();
    model.constant_minutes = ds.censoring_window();
    model.open_rate_feature = open_rate_feature;
    return model;
}

BaselineModel make_constant_time_baseline(const SurvivalDataset& ds) {
    BaselineModel model;
    model.variant = BaselineVariant::ConstantTime;
    model.feature_names = ds.feature_names();
    model.constant_minutes = ds.censoring_window();
    return model;
}

BaselinePrediction predict_baseline(const BaselineModel& model, const SurvivalRecord& record,
                                    const std::vector<std::string>& feature_names) {
    const double c = model.constant_minutes;
    switch (model.variant) {
        case BaselineVariant::OpenRate: {
            auto it = std::find(feature_names.begin(), feature_names.end(),
                                model.open_rate_feature);
            if (it == feature_names.end()) {
                throw DataError("record has no '" + model.open_rate_feature + "' feature");
            }
            double rate = record.features[static_cast<std::size_t>(it - feature_names.begin())];
            return {rate, c};
        }
        case BaselineVariant::ConstantTime:
            return {0.5, c};
        case BaselineVariant::Logistic:
            return {sigmoid(linear_score(model, record.features)), c};
        case BaselineVariant::Linear: {
            double eta = linear_score(model, record.features);
            double minutes = model.log_time ? std::exp(eta) : eta;
            minutes = std::clamp(minutes, model.epsilon_minutes, c);
            return {0.5, minutes};
        }
    }
    throw DataError("unknown baseline variant");
}

}  // namespace surv
