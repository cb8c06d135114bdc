#include "surv/cox_boost.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "surv/cox_design.hpp"
#include "surv/errors.hpp"
#include "surv/nonparametric.hpp"

namespace surv {

double RegressionTree::predict(std::span<const double> x) const {
    if (nodes.empty()) return 0.0;
    int idx = 0;
    while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
        const Node& node = nodes[static_cast<std::size_t>(idx)];
        idx = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(idx)].value;
}

double CoxBoostModel::score(std::span<const double> raw_features) const {
    double f = 0.0;
    for (const RegressionTree& tree : trees) f += tree.predict(raw_features);
    return config.learning_rate * f;
}

double relative_hazard(const CoxBoostModel& model, std::span<const double> raw_features) {
    return std::exp(model.score(raw_features));
}

namespace {

struct BinnedFeatures {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::vector<double>> edges;  // per feature, ascending, deduped
    std::vector<unsigned char> bins;         // row-major n x k

    unsigned char n_bins(std::size_t j) const {
        return static_cast<unsigned char>(edges[j].size() + 1);
    }
};

BinnedFeatures bin_features(const SurvivalDataset& ds, int n_quantiles) {
    BinnedFeatures out;
    out.n = ds.size();
    out.k = ds.n_features();
    out.edges.resize(out.k);
    out.bins.resize(out.n * out.k);

    std::vector<double> column(out.n);
    for (std::size_t j = 0; j < out.k; ++j) {
        for (std::size_t i = 0; i < out.n; ++i) column[i] = ds.row(i)[j];
        std::sort(column.begin(), column.end());

        auto& edges = out.edges[j];
        for (int b = 1; b < n_quantiles; ++b) {
            std::size_t pos = static_cast<std::size_t>(
                static_cast<double>(b) * static_cast<double>(out.n) /
                static_cast<double>(n_quantiles));
            pos = std::min(pos, out.n - 1);
            double edge = column[pos];
            if (edges.empty() || edge > edges.back()) edges.push_back(edge);
        }
        // an edge at the max value would send everything left
        while (!edges.empty() && edges.back() >= column.back()) edges.pop_back();

        for (std::size_t i = 0; i < out.n; ++i) {
            double v = ds.row(i)[j];
            auto it = std::lower_bound(edges.begin(), edges.end(), v);
            out.bins[i * out.k + j] = static_cast<unsigned char>(it - edges.begin());
        }
    }
    return out;
}

struct TreeBuilder {
    const BinnedFeatures& binned;
    const std::vector<double>& residuals;
    const BoostConfig& config;
    RegressionTree tree;

    // rows: indices into the dataset assigned to the node being built
    int build(std::vector<std::size_t>& rows, int depth) {
        double sum = 0.0;
        for (std::size_t i : rows) sum += residuals[i];
        const double n_node = static_cast<double>(rows.size());

        int best_feature = -1;
        int best_boundary = -1;
        double best_gain = 1e-12;  // require strictly positive improvement
        if (depth < config.max_depth && rows.size() >= 2 * static_cast<std::size_t>(
                                                             config.min_obs_per_leaf)) {
            std::vector<double> bin_sum;
            std::vector<std::size_t> bin_count;
            const double base = sum * sum / n_node;
            for (std::size_t j = 0; j < binned.k; ++j) {
                std::size_t nb = binned.n_bins(j);
                if (nb < 2) continue;
                bin_sum.assign(nb, 0.0);
                bin_count.assign(nb, 0);
                for (std::size_t i : rows) {
                    unsigned char b = binned.bins[i * binned.k + j];
                    bin_sum[b] += residuals[i];
                    ++bin_count[b];
                }
                double left_sum = 0.0;
                std::size_t left_count = 0;
                for (std::size_t b = 0; b + 1 < nb; ++b) {
                    left_sum += bin_sum[b];
                    left_count += bin_count[b];
                    std::size_t right_count = rows.size() - left_count;
                    if (left_count < static_cast<std::size_t>(config.min_obs_per_leaf)) continue;
                    if (right_count < static_cast<std::size_t>(config.min_obs_per_leaf)) break;
                    double right_sum = sum - left_sum;
                    double gain = left_sum * left_sum / static_cast<double>(left_count) +
                                  right_sum * right_sum / static_cast<double>(right_count) - base;
                    // strict comparison keeps the lowest (feature, threshold)
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(j);
                        best_boundary = static_cast<int>(b);
                    }
                }
            }
        }

        int idx = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (best_feature < 0) {
            tree.nodes[static_cast<std::size_t>(idx)].value = sum / n_node;
            return idx;
        }

        double threshold =
            binned.edges[static_cast<std::size_t>(best_feature)][static_cast<std::size_t>(
                best_boundary)];
        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        left_rows.reserve(rows.size());
        right_rows.reserve(rows.size());
        for (std::size_t i : rows) {
            unsigned char b = binned.bins[i * binned.k + static_cast<std::size_t>(best_feature)];
            (b <= static_cast<unsigned char>(best_boundary) ? left_rows : right_rows).push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();

        int left = build(left_rows, depth + 1);
        int right = build(right_rows, depth + 1);
        RegressionTree::Node& node = tree.nodes[static_cast<std::size_t>(idx)];
        node.feature = best_feature;
        node.threshold = threshold;
        node.left = left;
        node.right = right;
        return idx;
    }
};

}  // namespace

CoxBoostModel fit_cox_boost(const SurvivalDataset& ds, const BoostConfig& config,
                            std::uint64_t seed) {
    if (ds.empty()) throw FitError("cannot fit on an empty dataset");
    if (ds.n_events() == 0) throw FitError("cannot fit a Cox model without events");
    if (config.n_trees < 0 || config.learning_rate <= 0.0 || config.learning_rate > 1.0 ||
        config.min_obs_per_leaf < 1 || config.max_depth < 1) {
        throw FitError("invalid boosting configuration");
    }

    CoxBoostModel model;
    model.feature_names = ds.feature_names();
    model.config = config;
    model.seed = seed;
    model.censoring_window = ds.censoring_window();

    CoxDesign design(ds);
    BinnedFeatures binned = bin_features(ds, config.n_split_quantiles);

    std::vector<double> f(ds.size(), 0.0);
    model.train_pll_trace.reserve(static_cast<std::size_t>(config.n_trees));

    for (int stage = 0; stage < config.n_trees; ++stage) {
        std::vector<double> residuals = design.per_row_score_gradient(f);

        TreeBuilder builder{binned, residuals, config, {}};
        std::vector<std::size_t> rows(ds.size());
        std::iota(rows.begin(), rows.end(), 0);
        builder.build(rows, 0);

        if (builder.tree.nodes.size() == 1) {
            // no usable split; the residual pattern cannot change, so later
            // stages would stall the same way
            std::cerr << "warning: boosting stage " << stage
                      << " found no usable split; stopping early\n";
            model.skipped_stages = config.n_trees - stage;
            break;
        }

        for (std::size_t i = 0; i < ds.size(); ++i) {
            f[i] += config.learning_rate * builder.tree.predict(ds.row(i));
        }
        model.trees.push_back(std::move(builder.tree));
        model.train_pll_trace.push_back(design.partial_log_likelihood(f));
    }

    std::vector<double> psi(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) psi[i] = std::exp(f[i]);
    model.baseline = breslow_baseline(ds, psi);
    return model;
}

}  // namespace surv
