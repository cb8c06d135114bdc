#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "surv/curve.hpp"
#include "surv/types.hpp"

namespace surv {

/// Axis-aligned binary regression tree with constant leaf values.
/// Nodes are stored in a flat array; node 0 is the root.
struct RegressionTree {
    struct Node {
        int feature = -1;        // -1 marks a leaf
        double threshold = 0.0;  // go left when x[feature] <= threshold
        int left = -1;
        int right = -1;
        double value = 0.0;      // leaf prediction
    };
    std::vector<Node> nodes;

    double predict(std::span<const double> x) const;
};

struct BoostConfig {
    int n_trees = 200;
    double learning_rate = 0.05;
    int min_obs_per_leaf = 50;
    int max_depth = 3;
    int n_split_quantiles = 32;
};

/// Proportional-hazards model whose log relative hazard F(X) is a
/// shrinkage-weighted sum of regression trees fitted stagewise to the
/// gradient of the Cox partial likelihood.
struct CoxBoostModel {
    std::vector<std::string> feature_names;
    BoostConfig config;
    std::uint64_t seed = 0;
    std::vector<RegressionTree> trees;
    StepSurvivalCurve baseline;
    double censoring_window = 0.0;
    std::vector<double> train_pll_trace;  // partial log-likelihood after each stage
    int skipped_stages = 0;

    double score(std::span<const double> raw_features) const;  // F(X)
};

/// exp(F(X)); 1.0 for an empty ensemble.
double relative_hazard(const CoxBoostModel& model, std::span<const double> raw_features);

/// Stagewise fit: at each stage the per-row pseudo-residuals are the
/// partial-likelihood gradient with respect to the row's score; a tree is
/// fitted to them by squared-error splits over per-feature quantile
/// candidates and F is updated with shrinkage. Deterministic given seed.
CoxBoostModel fit_cox_boost(const SurvivalDataset& ds, const BoostConfig& config = {},
                            std::uint64_t seed = 0);

}  // namespace surv
