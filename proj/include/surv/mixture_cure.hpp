#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surv/curve.hpp"
#include "surv/newton.hpp"
#include "surv/standardize.hpp"
#include "surv/types.hpp"

namespace surv {

struct MixtureCureConfig {
    /// Incidence feature columns (names into the dataset). nullopt means
    /// all features; an empty list means intercept only. The intercept is
    /// always present.
    std::optional<std::vector<std::string>> incidence_features;
    ElasticNetPenalty incidence_penalty;   // on b, off by default
    ElasticNetPenalty latency_penalty;     // on beta, off by default
    double tol = 1e-7;                     // observed-data log-likelihood change
    int max_iterations = 500;
    NewtonConfig newton;
};

/// Two-state mixture: a logistic incidence component pi(Z) for being prone
/// to the event and a proportional-hazards latency component for when it
/// happens, fitted by EM over the latent proneness.
struct MixtureCureModel {
    std::vector<std::string> feature_names;            // latency X columns
    std::vector<std::string> incidence_feature_names;  // Z columns (no intercept)
    FeatureScaler latency_scaler;
    FeatureScaler incidence_scaler;
    std::vector<double> b;            // intercept first, standardized scale
    std::vector<double> beta;         // latency coefficients, standardized scale
    StepSurvivalCurve baseline;       // S(t | L = 1) baseline
    double censoring_window = 0.0;
    std::vector<double> em_trace;     // observed-data log-likelihood per iteration
    int iterations = 0;
    bool ridge_fallback = false;      // incidence fit needed a ridge floor

    double incidence_probability(std::span<const double> raw_z) const;  // pi(Z)
    double latency_relative_hazard(std::span<const double> raw_x) const;

    /// Z row pulled out of a full feature row by column subset.
    std::vector<double> incidence_row(std::span<const double> raw_features,
                                      const std::vector<std::string>& names) const;

    /// Coefficients mapped back to the raw feature scale, intercept first.
    std::vector<double> raw_incidence_coefficients() const;
    std::vector<double> raw_latency_coefficients() const;
};

/// S(t) = pi * S(t|L=1) + (1 - pi).
double mixture_survivor(double pi, double latency_survival);

/// Posterior weights P(L=1 | data): events get 1, censored rows
/// pi*S(C|L=1,X) / (pi*S(C|L=1,X) + 1 - pi).
std::vector<double> e_step(const SurvivalDataset& ds, const MixtureCureModel& model);

/// Alternating EM: posterior weights, weighted logistic for b, weighted Cox
/// partial likelihood for beta (censored rows enter risk sets with their
/// weight), weighted Breslow baseline. The em_trace of observed-data
/// log-likelihoods is non-decreasing. Throws FitError on an all-censored
/// dataset; an all-event dataset degenerates to plain CoxPH with a warning.
MixtureCureModel fit_mixture_cure(const SurvivalDataset& ds, const MixtureCureConfig& config = {});

struct EngagementCall {
    double pi;
    bool engaged;
};

/// pi(Z) thresholded at `threshold`; a tie counts as engaged.
EngagementCall classify_engagement(const MixtureCureModel& model, std::span<const double> raw_z,
                                   double threshold = 0.5);

}  // namespace surv
