#include "surv/newton.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "surv/errors.hpp"

namespace surv {

namespace {

double soft_threshold(double v, double threshold) {
    if (v > threshold) return v - threshold;
    if (v < -threshold) return v + threshold;
    return 0.0;
}

double factor(std::span<const double> factors, std::size_t j) {
    return factors.empty() ? 1.0 : factors[j];
}

// Direction d minimizing the local model
//   -g.d + d'Qd/2 + l1 * sum_j f_j |beta_j + d_j|
// by cyclic coordinate descent; Q is the negated Hessian of the smooth part.
std::vector<double> l1_direction(const Eigen::MatrixXd& q, const Eigen::VectorXd& g,
                                 std::span<const double> beta, double l1,
                                 std::span<const double> factors) {
    const std::size_t k = beta.size();
    std::vector<double> z(beta.begin(), beta.end());  // z = beta + d
    // residual r = g + Q beta - Q z, maintained incrementally
    Eigen::VectorXd qz = q * Eigen::Map<const Eigen::VectorXd>(beta.data(), k);
    Eigen::VectorXd qb = qz;
    for (int pass = 0; pass < 200; ++pass) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double qjj = std::max(q(j, j), 1e-12);
            double gj = g(j) + qb(j) - qz(j);
            double candidate = z[j] + gj / qjj;
            double next = soft_threshold(candidate, l1 * factor(factors, j) / qjj);
            double change = next - z[j];
            if (change != 0.0) {
                qz += q.col(j) * change;
                z[j] = next;
                max_change = std::max(max_change, std::fabs(change));
            }
        }
        if (max_change < 1e-12) break;
    }
    std::vector<double> d(k);
    for (std::size_t j = 0; j < k; ++j) d[j] = z[j] - beta[j];
    return d;
}

}  // namespace

double ElasticNetPenalty::value(std::span<const double> beta,
                                std::span<const double> factors) const {
    double p1 = 0.0;
    double p2 = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        double f = factor(factors, j);
        p1 += f * std::fabs(beta[j]);
        p2 += f * beta[j] * beta[j];
    }
    return l1() * p1 + 0.5 * l2() * p2;
}

NewtonResult maximize_penalized(const std::function<SmoothEval(std::span<const double>)>& eval,
                                std::vector<double> beta0, const ElasticNetPenalty& penalty,
                                std::span<const double> penalty_factors,
                                const NewtonConfig& config) {
    const std::size_t k = beta0.size();
    const double l1 = penalty.l1();
    const double l2 = penalty.l2();

    std::vector<double> beta = std::move(beta0);
    SmoothEval current = eval(beta);
    double objective = current.value - penalty.value(beta, penalty_factors);

    double grad_norm = 0.0;
    int stalled = 0;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        // smooth part of the penalized problem: f(beta) - l2/2 |beta|^2
        Eigen::Map<const Eigen::MatrixXd> hess(current.hessian.data(), k, k);
        Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(current.gradient.data(), k);
        Eigen::MatrixXd q = -hess;  // positive semi-definite for concave f
        for (std::size_t j = 0; j < k; ++j) {
            double f = factor(penalty_factors, j);
            g(j) -= l2 * f * beta[j];
            q(j, j) += l2 * f;
        }

        grad_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        if (l1 == 0.0 && grad_norm < config.gradient_tol) {
            return {beta, objective, iter - 1, grad_norm};
        }

        std::vector<double> direction;
        if (l1 == 0.0) {
            // damped solve: rank-deficient designs (collinear columns) would
            // otherwise produce junk directions
            double max_diag = std::max(q.diagonal().maxCoeff(), 1e-12);
            double damping = 0.0;
            Eigen::VectorXd d;
            bool usable = false;
            for (int attempt = 0; attempt < 7 && !usable; ++attempt) {
                Eigen::MatrixXd damped = q;
                damped.diagonal().array() += damping;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
                if (ldlt.info() == Eigen::Success) {
                    d = ldlt.solve(g);
                    usable = d.allFinite() && g.dot(d) > 0.0;
                }
                damping = damping == 0.0 ? 1e-10 * max_diag
                                         : std::max(damping * 100.0, 1e-8 * max_diag);
            }
            if (!usable) {
                d = g / max_diag;  // gradient fallback
            }
            direction.assign(d.data(), d.data() + k);
        } else {
            direction = l1_direction(q, g, beta, l1, penalty_factors);
        }

        double dir_norm = 0.0;
        for (double v : direction) dir_norm = std::max(dir_norm, std::fabs(v));
        if (dir_norm < 1e-13) {
            return {beta, objective, iter, grad_norm};
        }

        // step halving along beta + t * direction
        double t = 1.0;
        bool accepted = false;
        std::vector<double> trial(k);
        SmoothEval trial_eval;
        double trial_objective = 0.0;
        for (int halving = 0; halving < config.max_step_halvings; ++halving) {
            for (std::size_t j = 0; j < k; ++j) trial[j] = beta[j] + t * direction[j];
            trial_eval = eval(trial);
            trial_objective = trial_eval.value - penalty.value(trial, penalty_factors);
            if (std::isfinite(trial_objective) &&
                trial_objective >= objective - 1e-12 * (1.0 + std::fabs(objective))) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            return {beta, objective, iter, grad_norm};
        }

        double improvement = trial_objective - objective;
        beta = std::move(trial);
        current = std::move(trial_eval);
        objective = trial_objective;

        // objective-change convergence; one extra pass lets the gradient
        // check above see the post-step state first
        if (std::fabs(improvement) < config.objective_tol * (1.0 + std::fabs(objective))) {
            if (++stalled >= 2) {
                return {beta, objective, iter, grad_norm};
            }
        } else {
            stalled = 0;
        }
    }

    throw ConvergenceError("optimizer did not converge after " +
                               std::to_string(config.max_iterations) + " iterations (|grad|=" +
                               std::to_string(grad_norm) + ")",
                           beta, grad_norm);
}

}  // namespace surv
