#pragma once

#include <span>
#include <string>
#include <vector>

#include "surv/curve.hpp"
#include "surv/newton.hpp"
#include "surv/standardize.hpp"
#include "surv/types.hpp"

namespace surv {

struct CoxFitConfig {
    NewtonConfig newton;
};

/// Proportional-hazards model with linear relative hazard
/// psi(X) = exp(beta . x), fitted on standardized features.
struct CoxLinearModel {
    std::vector<std::string> feature_names;
    FeatureScaler scaler;
    std::vector<double> beta;        // on the standardized scale
    ElasticNetPenalty penalty;
    StepSurvivalCurve baseline;      // S0/H0 fitted at the solution
    double censoring_window = 0.0;
    int iterations = 0;
    double final_gradient_norm = 0.0;

    /// exp(beta . standardized x); strictly positive for finite x.
    double relative_hazard(std::span<const double> raw_features) const;

    /// Coefficients mapped back to the raw feature scale
    /// (beta_j / scale_j); the constant offset is absorbed by the baseline.
    std::vector<double> raw_coefficients() const;
};

/// Plain (unstandardized, unweighted) partial log-likelihood of beta on the
/// dataset's raw features; censored rows only enlarge denominators.
double partial_log_likelihood(const SurvivalDataset& ds, std::span<const double> beta);

/// Gradient of the above, component j = sum over events of (x_ij - a_ij).
std::vector<double> partial_ll_gradient(const SurvivalDataset& ds, std::span<const double> beta);

/// Maximizes the Elastic-Net-penalized partial log-likelihood by Newton
/// iterations with step halving, then fits the Breslow baseline at the
/// solution. Deterministic. Throws ConvergenceError (with the last iterate)
/// when max iterations run out, FitError when the dataset has no events.
CoxLinearModel fit_cox_linear(const SurvivalDataset& ds, const ElasticNetPenalty& penalty = {},
                              const CoxFitConfig& config = {});

/// Schoenfeld residuals and the per-feature time-trend check.
struct FeatureTrend {
    std::string feature;
    std::vector<double> event_times;
    std::vector<double> residuals;   // r_ij = x_ij - a_ij, event rows only
    double residual_sum = 0.0;
    double correlation = 0.0;        // Pearson r against the KM time transform
    double p_value = 1.0;
};

struct ProportionalityReport {
    std::vector<FeatureTrend> features;
    double significance_level = 0.05;
    bool insufficient = false;       // fewer than 3 events
    bool all_pass() const;
};

/// Residuals r_ij = x_ij - a_ij at the fitted coefficients, with a trend
/// test of each residual series against Kaplan-Meier-transformed event
/// time (Pearson correlation, Student-t p-value).
ProportionalityReport schoenfeld_residuals(const SurvivalDataset& ds, const CoxLinearModel& model,
                                           double significance_level = 0.05);

}  // namespace surv
