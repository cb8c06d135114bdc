#pragma once

#include <span>
#include <string>
#include <vector>

#include "surv/newton.hpp"
#include "surv/standardize.hpp"
#include "surv/types.hpp"

namespace surv {

enum class BaselineVariant { OpenRate, ConstantTime, Logistic, Linear };

/// The comparison baselines: historical open-rate scorer, constant-C time
/// predictor, logistic regression for open/not-open and linear regression
/// on the uncensored rows for time-to-open.
struct BaselineModel {
    BaselineVariant variant = BaselineVariant::ConstantTime;
    std::vector<std::string> feature_names;
    FeatureScaler scaler;
    std::vector<double> coefficients;  // intercept first, standardized scale
    ElasticNetPenalty penalty;
    double constant_minutes = 0.0;     // the training censoring window
    std::string open_rate_feature = "open_rate";
    bool log_time = true;              // linear variant regresses log duration
    double epsilon_minutes = 0.5;
    int iterations = 0;
};

struct BaselinePrediction {
    double open_probability;
    double predicted_minutes;
};

/// Elastic-Net logistic regression of the event indicator on the features.
/// Throws FitError when only one class is present.
BaselineModel fit_logistic(const SurvivalDataset& ds, const ElasticNetPenalty& penalty = {},
                           const NewtonConfig& config = {});

/// Least squares of (by default log) duration on the features over event
/// rows only; predictions are exponentiated and clamped into
/// (epsilon, C]. Throws FitError with fewer than 2 event rows.
BaselineModel fit_linear_time(const SurvivalDataset& ds, const ElasticNetPenalty& penalty = {},
                              bool log_time = true, const NewtonConfig& config = {});

/// Historical open-rate scorer; pairs the rate with the constant-C time.
BaselineModel make_open_rate_baseline(const SurvivalDataset& ds,
                                      const std::string& open_rate_feature = "open_rate");

BaselineModel make_constant_time_baseline(const SurvivalDataset& ds);

BaselinePrediction predict_baseline(const BaselineModel& model, const SurvivalRecord& record,
                                    const std::vector<std::string>& feature_names);

}  // namespace surv
