#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "surv/baselines.hpp"
#include "surv/cox_boost.hpp"
#include "surv/cox_linear.hpp"
#include "surv/curve.hpp"
#include "surv/mixture_cure.hpp"
#include "surv/types.hpp"

namespace surv {

enum class ModelKind { OpenRate, Regression, CoxLinear, CoxBoost, MixtureCure };

/// Everything needed to (re)fit one model: kind plus hyper-parameters.
struct ModelSpec {
    std::string name;  // report label, e.g. "b", "lr", "cph-l", "cph-g", "mm"
    ModelKind kind = ModelKind::CoxLinear;
    ElasticNetPenalty penalty;        // lr and cph-l
    BoostConfig boost;                // cph-g
    MixtureCureConfig mixture;        // mm
    std::uint64_t seed = 0;
    std::string open_rate_feature = "open_rate";
};

/// The paper's LR row: a logistic classifier paired with a linear
/// time-to-open regressor.
struct RegressionBaselinePair {
    BaselineModel classifier;
    BaselineModel time;
};

using FittedModel =
    std::variant<BaselineModel, RegressionBaselinePair, CoxLinearModel, CoxBoostModel,
                 MixtureCureModel>;

FittedModel fit_model(const ModelSpec& spec, const SurvivalDataset& train);

/// Individual survivor curves. Cox variants raise the baseline to the
/// relative hazard (equivalently scale H0); the mixture composes the
/// latency curve with pi(Z).
StepSurvivalCurve individual_survivor(const CoxLinearModel& model,
                                      std::span<const double> raw_x);
StepSurvivalCurve individual_survivor(const CoxBoostModel& model, std::span<const double> raw_x);
StepSurvivalCurve individual_survivor(const MixtureCureModel& model,
                                      std::span<const double> raw_x,
                                      std::span<const double> raw_z);

/// Largest time within [0, C] at which the curve still sits above
/// 1 - p/100; returns the crossing step time, or C when the curve never
/// drops that far (saturation convention).
double predict_time_percentile(const StepSurvivalCurve& curve, double percentile, double window);

/// Mann-Whitney AUC with ties counted 0.5. Throws FitError when only one
/// class is present.
double auc(std::span<const double> scores, std::span<const unsigned char> labels);

enum class MradMode { AllRows, ObservedOnly };

/// Mean relative absolute deviation |t - t_hat| / t; mode AllRows averages
/// over everything (censored actuals are the window), ObservedOnly
/// restricts to event rows.
double mrad(std::span<const double> actual, std::span<const double> predicted, MradMode mode,
            std::span<const unsigned char> events);

/// One scored validation row.
struct PredictionRow {
    std::string individual_id;
    double open_probability_at_window;
    std::vector<double> t_hat;  // one per requested percentile
    double actual_duration;
    bool actual_event;
};

std::vector<PredictionRow> score_dataset(const FittedModel& model, const SurvivalDataset& ds,
                                         std::span<const double> percentiles);

struct EvaluationEntry {
    std::string model;
    double window_minutes = 0.0;
    double percentile = 0.0;
    double auc = 0.0;
    double mrad_a = 0.0;
    double mrad_o = 0.0;
    std::size_t n_observed = 0;
    std::size_t n_censored = 0;
    bool failed = false;
    std::string error;
};

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

struct BootstrapEntry {
    std::string model;
    double window_minutes = 0.0;
    double percentile = 0.0;
    int n_samples = 0;
    MeanStd auc;
    MeanStd mrad_o;
};

struct EvaluationReport {
    std::vector<EvaluationEntry> entries;
    std::vector<BootstrapEntry> bootstrap;
    std::map<std::string, std::string> metadata;
    bool any_failures = false;
};

struct EvaluateOptions {
    std::vector<double> windows = {180.0, 360.0, 720.0};
    std::vector<double> percentiles = {5, 10, 25, 50, 75, 90};
    double epsilon_minutes = 0.5;
};

/// For each censoring window: re-derive durations and events from the raw
/// logs, fit every spec on the training split and score the validation
/// split. A model failure is recorded in its entries without aborting the
/// other models.
EvaluationReport evaluate(std::span<const ModelSpec> specs, const RawEventLog& train,
                          const RawEventLog& validate, const EvaluateOptions& options = {});

/// Resamples the training rows with replacement n times (size preserved),
/// refits the spec with fixed hyper-parameters and scores the validation
/// split; reports mean and stddev of AUC and MRAD(O) at the given
/// percentile. Samples without events are redrawn (bounded retries).
/// `sampler` overrides the resampling (tests use it to force identity).
BootstrapEntry bootstrap_stability(
    const ModelSpec& spec, const SurvivalDataset& train, const SurvivalDataset& validate,
    double percentile, int n = 10, std::uint64_t seed = 0,
    const std::function<std::vector<std::size_t>(std::size_t, std::uint64_t)>& sampler = {});

void save_report_csv(const EvaluationReport& report, const std::string& path);

}  // namespace surv
