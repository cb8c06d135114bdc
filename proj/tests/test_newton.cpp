#include <doctest.h>

#include <cmath>
#include <vector>

#include "surv/errors.hpp"
#include "surv/newton.hpp"

using namespace surv;

namespace {

// concave quadratic -(beta - target)' A (beta - target) / 2 with A spd
SmoothEval quadratic(std::span<const double> beta, const std::vector<double>& target,
                     const std::vector<double>& a) {
    const std::size_t k = beta.size();
    SmoothEval out;
    out.gradient.assign(k, 0.0);
    out.hessian.assign(k * k, 0.0);
    std::vector<double> diff(k);
    for (std::size_t i = 0; i < k; ++i) diff[i] = beta[i] - target[i];
    out.value = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out.value -= 0.5 * diff[i] * a[i * k + j] * diff[j];
            out.gradient[i] -= a[i * k + j] * diff[j];
            out.hessian[i * k + j] = -a[i * k + j];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("unpenalized newton lands on the quadratic maximizer") {
    std::vector<double> target{2.0, -1.0};
    std::vector<double> a{2.0, 0.3, 0.3, 1.0};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    auto result = maximize_penalized(eval, {0.0, 0.0}, {}, {});
    CHECK(result.beta[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(result.beta[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(result.gradient_norm <= 1e-8);
}

TEST_CASE("a dominating l1 penalty pins coefficients at exactly zero") {
    std::vector<double> target{0.5, -0.25};
    std::vector<double> a{1.0, 0.0, 0.0, 1.0};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    auto result = maximize_penalized(eval, {0.0, 0.0}, {100.0, 1.0}, {});
    CHECK(result.beta[0] == 0.0);
    CHECK(result.beta[1] == 0.0);
}

TEST_CASE("l1 solution matches the soft-threshold closed form") {
    // separable quadratic: argmax -(b - t)^2/2 - l1 |b| = soft(t, l1)
    std::vector<double> target{1.5, -0.8, 0.05};
    std::vector<double> a{1, 0, 0, 0, 1, 0, 0, 0, 1};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    double l1 = 0.3;
    auto result = maximize_penalized(eval, {0.0, 0.0, 0.0}, {l1, 1.0}, {});
    CHECK(result.beta[0] == doctest::Approx(1.2).epsilon(1e-8));
    CHECK(result.beta[1] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(result.beta[2] == 0.0);
}

TEST_CASE("penalty factors exempt chosen coefficients") {
    std::vector<double> target{1.0, 1.0};
    std::vector<double> a{1, 0, 0, 1};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    std::vector<double> factors{0.0, 1.0};
    auto result = maximize_penalized(eval, {0.0, 0.0}, {0.4, 1.0}, factors);
    CHECK(result.beta[0] == doctest::Approx(1.0).epsilon(1e-8));   // unpenalized
    CHECK(result.beta[1] == doctest::Approx(0.6).epsilon(1e-8));   // soft-thresholded
}

TEST_CASE("iteration exhaustion carries the last iterate") {
    std::vector<double> target{5.0};
    std::vector<double> a{1.0};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    NewtonConfig config;
    config.max_iterations = 0;
    CHECK_THROWS_AS(maximize_penalized(eval, {0.0}, {}, {}, config), ConvergenceError);
    try {
        maximize_penalized(eval, {0.0}, {}, {}, config);
    } catch (const ConvergenceError& e) {
        CHECK(e.last_iterate.size() == 1);
        CHECK(e.last_iterate[0] == 0.0);
        CHECK(std::isfinite(e.gradient_norm));
    }
}

TEST_CASE("ridge penalty shrinks the quadratic solution") {
    std::vector<double> target{2.0};
    std::vector<double> a{1.0};
    auto eval = [&](std::span<const double> b) { return quadratic(b, target, a); };
    // argmax -(b-2)^2/2 - l2 b^2 / 2 = 2 / (1 + l2)
    auto result = maximize_penalized(eval, {0.0}, {0.5, 0.0}, {});
    CHECK(result.beta[0] == doctest::Approx(2.0 / 1.5).epsilon(1e-8));
}
