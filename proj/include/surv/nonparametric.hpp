#pragma once

#include <span>
#include <utility>

#include "surv/curve.hpp"
#include "surv/types.hpp"

namespace surv {

/// Kaplan-Meier product-limit survivor estimate. The cumulative hazard
/// column is log-derived (-log S). With no events the curve is flat at 1
/// and a warning is printed.
StepSurvivalCurve kaplan_meier(const SurvivalDataset& ds);

/// Breslow cumulative baseline hazard given per-row relative hazards
/// psi > 0: H0 jumps by d_j / sum_{l in R(t_j)} psi_l at each event time.
/// Events at the same time share the risk set.
StepSurvivalCurve breslow_baseline(const SurvivalDataset& ds,
                                   std::span<const double> relative_hazards);

/// Weighted variant used by the mixture-cure M-step: row l contributes
/// weight_l * psi_l to risk sets and events are counted with their weight.
StepSurvivalCurve breslow_baseline_weighted(const SurvivalDataset& ds,
                                            std::span<const double> relative_hazards,
                                            std::span<const double> weights);

struct LogRankResult {
    double statistic;
    double p_value;
};

/// Two-sample log-rank chi-square test (1 df). Groups must share the
/// censoring window; symmetric in its arguments.
LogRankResult log_rank_test(const SurvivalDataset& group_a, const SurvivalDataset& group_b);

}  // namespace surv
