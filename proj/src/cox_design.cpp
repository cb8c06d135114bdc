#include "surv/cox_design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surv/errors.hpp"

namespace surv {

CoxDesign::CoxDesign(const SurvivalDataset& ds, std::vector<double> features) : n_(ds.size()) {
    if (n_ == 0) throw DataError("Cox design over an empty dataset");
    if (features.empty()) {
        k_ = ds.n_features();
        features_.reserve(n_ * k_);
        for (std::size_t i = 0; i < n_; ++i) {
            auto r = ds.row(i);
            features_.insert(features_.end(), r.begin(), r.end());
        }
    } else {
        if (features.size() % n_ != 0) throw DataError("feature matrix shape mismatch");
        k_ = features.size() / n_;
        features_ = std::move(features);
    }
    durations_ = ds.durations();
    events_ = ds.events();

    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        if (durations_[a] != durations_[b]) return durations_[a] > durations_[b];
        return a < b;
    });

    std::size_t i = 0;
    while (i < n_) {
        double t = durations_[order_[i]];
        TieBlock block{i, i, 0};
        while (block.end < n_ && durations_[order_[block.end]] == t) {
            if (events_[order_[block.end]]) ++block.d;
            ++block.end;
        }
        n_events_ += block.d;
        blocks_.push_back(block);
        i = block.end;
    }
}

std::vector<double> CoxDesign::linear_predictor(std::span<const double> beta) const {
    if (beta.size() != k_) throw DataError("coefficient length mismatch");
    std::vector<double> eta(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* x = features_.data() + i * k_;
        double v = 0.0;
        for (std::size_t j = 0; j < k_; ++j) v += beta[j] * x[j];
        eta[i] = v;
    }
    return eta;
}

double CoxDesign::partial_log_likelihood(std::span<const double> eta,
                                         std::span<const double> weights) const {
    const double shift = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
    double pll = 0.0;
    double risk_sum = 0.0;  // sum of w * exp(eta - shift) over the risk set
    for (const TieBlock& block : blocks_) {
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            double w = weights.empty() ? 1.0 : weights[i];
            risk_sum += w * std::exp(eta[i] - shift);
        }
        if (block.d == 0) continue;
        double log_denom = shift + std::log(risk_sum);
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            if (!events_[i]) continue;
            double w = weights.empty() ? 1.0 : weights[i];
            pll += w * (eta[i] - log_denom);
        }
    }
    return pll;
}

CoxDesign::Derivatives CoxDesign::derivatives(std::span<const double> beta,
                                              std::span<const double> weights) const {
    auto eta = linear_predictor(beta);
    const double shift = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());

    Derivatives out;
    out.value = 0.0;
    out.gradient.assign(k_, 0.0);
    out.hessian.assign(k_ * k_, 0.0);

    double a0 = 0.0;
    std::vector<double> a1(k_, 0.0);
    std::vector<double> a2(k_ * k_, 0.0);
    std::vector<double> mean(k_, 0.0);

    for (const TieBlock& block : blocks_) {
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            double w = weights.empty() ? 1.0 : weights[i];
            double r = w * std::exp(eta[i] - shift);
            if (r == 0.0) continue;
            const double* x = features_.data() + i * k_;
            a0 += r;
            for (std::size_t j = 0; j < k_; ++j) {
                a1[j] += r * x[j];
                double rx = r * x[j];
                double* a2j = a2.data() + j * k_;
                for (std::size_t l = j; l < k_; ++l) a2j[l] += rx * x[l];
            }
        }
        if (block.d == 0) continue;

        double log_denom = shift + std::log(a0);
        for (std::size_t j = 0; j < k_; ++j) mean[j] = a1[j] / a0;
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            if (!events_[i]) continue;
            double w = weights.empty() ? 1.0 : weights[i];
            const double* x = features_.data() + i * k_;
            out.value += w * (eta[i] - log_denom);
            for (std::size_t j = 0; j < k_; ++j) {
                out.gradient[j] += w * (x[j] - mean[j]);
                double* hj = out.hessian.data() + j * k_;
                const double* a2j = a2.data() + j * k_;
                for (std::size_t l = j; l < k_; ++l) {
                    hj[l] -= w * (a2j[l] / a0 - mean[j] * mean[l]);
                }
            }
        }
    }
    // mirror the upper triangle
    for (std::size_t j = 0; j < k_; ++j) {
        for (std::size_t l = 0; l < j; ++l) {
            out.hessian[j * k_ + l] = out.hessian[l * k_ + j];
        }
    }
    return out;
}

CoxDesign::EventMeans CoxDesign::event_feature_means(std::span<const double> eta) const {
    const double shift = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
    EventMeans out;
    out.rows.reserve(n_events_);
    out.means.reserve(n_events_ * k_);

    double a0 = 0.0;
    std::vector<double> a1(k_, 0.0);
    for (const TieBlock& block : blocks_) {
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            double r = std::exp(eta[i] - shift);
            const double* x = features_.data() + i * k_;
            a0 += r;
            for (std::size_t j = 0; j < k_; ++j) a1[j] += r * x[j];
        }
        if (block.d == 0) continue;
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            if (!events_[i]) continue;
            out.rows.push_back(i);
            for (std::size_t j = 0; j < k_; ++j) out.means.push_back(a1[j] / a0);
        }
    }

    // the sweep runs backwards in time; flip to ascending event time
    std::reverse(out.rows.begin(), out.rows.end());
    const std::size_t m = out.rows.size();
    for (std::size_t e = 0; e < m / 2; ++e) {
        for (std::size_t j = 0; j < k_; ++j) {
            std::swap(out.means[e * k_ + j], out.means[(m - 1 - e) * k_ + j]);
        }
    }
    return out;
}

CoxDesign::HazardSteps CoxDesign::breslow_steps(std::span<const double> eta,
                                                std::span<const double> weights) const {
    const double shift = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
    // increments in descending-time order, flipped at the end
    std::vector<double> times;
    std::vector<double> increments;
    double a0 = 0.0;
    for (const TieBlock& block : blocks_) {
        double d = 0.0;
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            double w = weights.empty() ? 1.0 : weights[i];
            a0 += w * std::exp(eta[i] - shift);
            if (events_[i]) d += w;
        }
        if (d > 0.0) {
            times.push_back(durations_[order_[block.begin]]);
            increments.push_back(d * std::exp(-shift) / a0);
        }
    }
    std::reverse(times.begin(), times.end());
    std::reverse(increments.begin(), increments.end());

    HazardSteps steps;
    steps.times = std::move(times);
    steps.cum_hazard.resize(increments.size());
    double h = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        h += increments[i];
        steps.cum_hazard[i] = h;
    }
    return steps;
}

std::vector<double> CoxDesign::per_row_score_gradient(std::span<const double> eta) const {
    const double shift = eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
    // Breslow increments per block (descending sweep), then a suffix sum
    // turns them into H0 at each block's time.
    // increments carry the exp(-shift) factor so the final product
    // exp(eta - shift) * H stays in range
    std::vector<double> block_increment(blocks_.size(), 0.0);
    double a0 = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const TieBlock& block = blocks_[b];
        double d = 0.0;
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            a0 += std::exp(eta[i] - shift);
            if (events_[i]) d += 1.0;
        }
        if (d > 0.0) block_increment[b] = d / a0;
    }
    // blocks are in descending time order, so H0 at block b sums b..end
    std::vector<double> block_hazard(blocks_.size(), 0.0);
    double h = 0.0;
    for (std::size_t b = blocks_.size(); b-- > 0;) {
        h += block_increment[b];
        block_hazard[b] = h;
    }

    std::vector<double> grad(n_, 0.0);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const TieBlock& block = blocks_[b];
        for (std::size_t p = block.begin; p < block.end; ++p) {
            std::size_t i = order_[p];
            grad[i] = (events_[i] ? 1.0 : 0.0) - std::exp(eta[i] - shift) * block_hazard[b];
        }
    }
    return grad;
}

}  // namespace surv
