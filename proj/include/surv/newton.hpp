#pragma once

#include <functional>
#include <span>
#include <vector>

namespace surv {

/// Elastic-Net penalty: lambda * (alpha * |beta|_1 + (1-alpha)/2 * |beta|_2^2).
struct ElasticNetPenalty {
    double lambda = 0.0;
    double alpha = 1.0;

    double l1() const { return lambda * alpha; }
    double l2() const { return lambda * (1.0 - alpha); }
    double value(std::span<const double> beta, std::span<const double> factors) const;
};

struct NewtonConfig {
    int max_iterations = 100;
    double objective_tol = 1e-9;   // relative objective change
    double gradient_tol = 1e-8;    // inf-norm of the penalized gradient
    int max_step_halvings = 40;
};

/// Smooth part of the objective at one point: value, gradient and Hessian
/// (row-major k x k, negative semi-definite for concave problems).
struct SmoothEval {
    double value;
    std::vector<double> gradient;
    std::vector<double> hessian;
};

struct NewtonResult {
    std::vector<double> beta;
    double objective;       // penalized objective at the solution
    int iterations;
    double gradient_norm;   // smooth-part gradient inf-norm at the solution
};

/// Maximizes eval(beta) - penalty over beta by Newton-Raphson with step
/// halving. The L1 part is handled by soft-thresholding inside the Newton
/// direction (coordinate descent on the local quadratic model), so exact
/// zeros are reachable. `penalty_factors` scales the penalty per coefficient
/// (0 leaves e.g. an intercept unpenalized); empty means all ones.
/// Throws ConvergenceError when max_iterations is exhausted.
NewtonResult maximize_penalized(
    const std::function<SmoothEval(std::span<const double>)>& eval,
    std::vector<double> beta0, const ElasticNetPenalty& penalty,
    std::span<const double> penalty_factors = {}, const NewtonConfig& config = {});

}  // namespace surv
