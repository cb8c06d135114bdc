#include "surv/special.hpp"

#include <cmath>
#include <limits>

namespace surv {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxTerms = 1000;

// Lower incomplete gamma by series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxTerms; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by modified Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxTerms; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double mult = d * c;
        h *= mult;
        if (std::fabs(mult - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double beta_cf(double x, double a, double b) {
    const double tiny = 1e-300;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxTerms; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double mult = d * c;
        h *= mult;
        if (std::fabs(mult - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(k / 2.0, x / 2.0);
}

double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(x, a, b) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     beta_cf(1.0 - x, b, a) / b;
}

double student_t_two_sided_p(double t, double nu) {
    if (nu <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(t)) return 0.0;
    double x = nu / (nu + t * t);
    return regularized_beta(x, nu / 2.0, 0.5);
}

}  // namespace surv
