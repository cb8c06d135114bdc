#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "surv/newton.hpp"

namespace surv::detail {

/// Design matrix with a leading intercept column; `x` is row-major n x k of
/// already-standardized features.
struct GlmDesign {
    const std::vector<double>* x;
    std::size_t n;
    std::size_t k;

    double linear(std::span<const double> coef, std::size_t i) const {
        const double* row = x->data() + i * k;
        double eta = coef[0];
        for (std::size_t j = 0; j < k; ++j) eta += coef[j + 1] * row[j];
        return eta;
    }
};

struct LogisticFitResult {
    std::vector<double> coef;  // intercept first
    int iterations = 0;
    bool ridge_fallback = false;
};

/// Logistic log-likelihood with gradient and Hessian at `coef`
/// (intercept first); targets may be fractional.
SmoothEval logistic_smooth_eval(const GlmDesign& design, std::span<const double> targets,
                                std::span<const double> coef);

/// Logistic log-likelihood maximization with fractional targets in [0, 1].
/// The intercept is never penalized. Separation (divergence or runaway
/// coefficients) triggers a ridge refit with a warning. `init` warm-starts
/// the iteration (empty means zeros).
LogisticFitResult fit_logistic_fractional(const GlmDesign& design, std::span<const double> targets,
                                          const ElasticNetPenalty& penalty,
                                          const NewtonConfig& config,
                                          std::vector<double> init = {});

/// Elastic-Net least squares of `targets` on the design (mean-squared-error
/// scale, so lambda is comparable with the logistic fit).
std::vector<double> fit_least_squares(const GlmDesign& design, std::span<const double> targets,
                                      const ElasticNetPenalty& penalty,
                                      const NewtonConfig& config);

}  // namespace surv::detail
