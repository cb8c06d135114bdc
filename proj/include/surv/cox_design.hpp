#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "surv/types.hpp"

namespace surv {

/// Rows sorted by duration with tie blocks precomputed, shared by the
/// partial-likelihood evaluations, the Breslow estimator and the boosting
/// pseudo-residuals. Build once per fit; weights may change between calls.
class CoxDesign {
public:
    /// `features` is row-major n x k; when empty the dataset's own raw
    /// features are copied.
    CoxDesign(const SurvivalDataset& ds, std::vector<double> features = {});

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t n_events() const { return n_events_; }

    std::span<const double> feature_row(std::size_t i) const {
        return {features_.data() + i * k_, k_};
    }
    double duration(std::size_t i) const { return durations_[i]; }
    bool event(std::size_t i) const { return events_[i] != 0; }

    /// Row indices in descending-duration order.
    const std::vector<std::size_t>& descending_order() const { return order_; }

    /// Linear predictor eta_i = beta . x_i for every row.
    std::vector<double> linear_predictor(std::span<const double> beta) const;

    /// Weighted Breslow-tie partial log-likelihood at the given per-row
    /// linear predictors. Empty weights mean all ones. Log-sum-exp guarded.
    double partial_log_likelihood(std::span<const double> eta,
                                  std::span<const double> weights = {}) const;

    /// Value, gradient and Hessian (row-major k x k) of the weighted
    /// partial log-likelihood with respect to beta.
    struct Derivatives {
        double value;
        std::vector<double> gradient;
        std::vector<double> hessian;
    };
    Derivatives derivatives(std::span<const double> beta,
                            std::span<const double> weights = {}) const;

    /// Risk-set weighted feature means a_ij at each event row, ascending in
    /// event time.
    struct EventMeans {
        std::vector<std::size_t> rows;            // dataset row of each event
        std::vector<double> means;                // row-major, size rows * k
    };
    EventMeans event_feature_means(std::span<const double> eta) const;

    /// Gradient of the partial log-likelihood with respect to each row's
    /// score: delta_i - exp(eta_i) * H0(Y_i) with H0 the Breslow hazard at
    /// the current eta (the boosting pseudo-residual).
    std::vector<double> per_row_score_gradient(std::span<const double> eta) const;

    /// Breslow cumulative-hazard steps at the current eta: ascending event
    /// times and H0 values.
    struct HazardSteps {
        std::vector<double> times;
        std::vector<double> cum_hazard;
    };
    HazardSteps breslow_steps(std::span<const double> eta,
                              std::span<const double> weights = {}) const;

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::size_t n_events_ = 0;
    std::vector<double> features_;
    std::vector<double> durations_;
    std::vector<unsigned char> events_;
    std::vector<std::size_t> order_;   // by duration descending, index ascending
    // [begin, end) ranges into order_ covering one distinct duration each,
    // in descending time order, plus the number of events in the block.
    struct TieBlock {
        std::size_t begin;
        std::size_t end;
        std::size_t d;
    };
    std::vector<TieBlock> blocks_;
};

}  // namespace surv
