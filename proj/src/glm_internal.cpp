#include "glm_internal.hpp"

#include <cmath>
#include <iostream>

#include "surv/errors.hpp"

namespace surv::detail {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow
double log1pexp(double x) {
    if (x > 35.0) return x;
    return std::log1p(std::exp(x));
}

SmoothEval logistic_eval_impl(const GlmDesign& design, std::span<const double> targets,
                              std::span<const double> coef) {
    const std::size_t p = design.k + 1;
    SmoothEval out;
    out.value = 0.0;
    out.gradient.assign(p, 0.0);
    out.hessian.assign(p * p, 0.0);

    for (std::size_t i = 0; i < design.n; ++i) {
        double eta = design.linear(coef, i);
        double y = targets[i];
        double pr = sigmoid(eta);
        out.value += y * eta - log1pexp(eta);
        double resid = y - pr;
        double w = pr * (1.0 - pr);

        const double* row = design.x->data() + i * design.k;
        out.gradient[0] += resid;
        out.hessian[0] -= w;
        for (std::size_t j = 0; j < design.k; ++j) {
            out.gradient[j + 1] += resid * row[j];
            out.hessian[j + 1] -= w * row[j];                        // (0, j+1)
            double* hrow = out.hessian.data() + (j + 1) * p;
            for (std::size_t l = j; l < design.k; ++l) {
                hrow[l + 1] -= w * row[j] * row[l];
            }
        }
    }
    // mirror
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            out.hessian[a * p + b] = out.hessian[b * p + a];
        }
    }
    return out;
}

}  // namespace

SmoothEval logistic_smooth_eval(const GlmDesign& design, std::span<const double> targets,
                                std::span<const double> coef) {
    return logistic_eval_impl(design, targets, coef);
}

LogisticFitResult fit_logistic_fractional(const GlmDesign& design, std::span<const double> targets,
                                          const ElasticNetPenalty& penalty,
                                          const NewtonConfig& config, std::vector<double> init) {
    const std::size_t p = design.k + 1;
    std::vector<double> factors(p, 1.0);
    factors[0] = 0.0;  // free intercept
    if (init.empty()) init.assign(p, 0.0);

    auto eval = [&](std::span<const double> coef) { return logistic_eval_impl(design, targets, coef); };

    LogisticFitResult result;
    bool retry = false;
    try {
        NewtonResult fit = maximize_penalized(eval, std::move(init), penalty, factors, config);
        result.coef = std::move(fit.beta);
        result.iterations = fit.iterations;
        // standardized-scale coefficients this size mean (quasi-)separation
        for (double c : result.coef) {
            if (std::fabs(c) > 15.0) retry = true;
        }
    } catch (const ConvergenceError&) {
        retry = true;
    }

    if (retry) {
        std::cerr << "warning: logistic fit hit separation; refitting with a ridge floor\n";
        ElasticNetPenalty ridge{penalty.lambda + 1e-3, 0.0};
        NewtonResult fit = maximize_penalized(eval, std::vector<double>(p, 0.0), ridge, {},
                                              config);  // penalize everything, intercept too
        result.coef = std::move(fit.beta);
        result.iterations = fit.iterations;
        result.ridge_fallback = true;
    }
    return result;
}

std::vector<double> fit_least_squares(const GlmDesign& design, std::span<const double> targets,
                                      const ElasticNetPenalty& penalty,
                                      const NewtonConfig& config) {
    const std::size_t p = design.k + 1;
    std::vector<double> factors(p, 1.0);
    factors[0] = 0.0;
    const double inv_n = 1.0 / static_cast<double>(design.n);

    auto eval = [&](std::span<const double> coef) {
        SmoothEval out;
        out.value = 0.0;
        out.gradient.assign(p, 0.0);
        out.hessian.assign(p * p, 0.0);
        for (std::size_t i = 0; i < design.n; ++i) {
            double resid = targets[i] - design.linear(coef, i);
            out.value -= 0.5 * resid * resid * inv_n;
            const double* row = design.x->data() + i * design.k;
            out.gradient[0] += resid * inv_n;
            out.hessian[0] -= inv_n;
            for (std::size_t j = 0; j < design.k; ++j) {
                out.gradient[j + 1] += resid * row[j] * inv_n;
                out.hessian[j + 1] -= row[j] * inv_n;
                double* hrow = out.hessian.data() + (j + 1) * p;
                for (std::size_t l = j; l < design.k; ++l) {
                    hrow[l + 1] -= row[j] * row[l] * inv_n;
                }
            }
        }
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < a; ++b) {
                out.hessian[a * p + b] = out.hessian[b * p + a];
            }
        }
        return out;
    };

    NewtonResult fit = maximize_penalized(eval, std::vector<double>(p, 0.0), penalty, factors,
                                          config);
    return fit.beta;
}

}  // namespace surv::detail
