#include "surv/mixture_cure.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "glm_internal.hpp"
#include "surv/cox_design.hpp"
#include "surv/errors.hpp"

namespace surv {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<std::size_t> incidence_columns(const SurvivalDataset& ds,
                                           const MixtureCureConfig& config) {
    std::vector<std::size_t> cols;
    if (!config.incidence_features) {
        cols.resize(ds.n_features());
        std::iota(cols.begin(), cols.end(), 0);
        return cols;
    }
    for (const std::string& name : *config.incidence_features) {
        int idx = ds.feature_index(name);
        if (idx < 0) throw FitError("incidence feature '" + name + "' not in dataset");
        cols.push_back(static_cast<std::size_t>(idx));
    }
    return cols;
}

// standardized Z matrix (n x kz) for a column subset
struct IncidenceMatrix {
    std::vector<double> values;
    FeatureScaler scaler;
    std::vector<std::string> names;
};

IncidenceMatrix build_incidence_matrix(const SurvivalDataset& ds,
                                       const std::vector<std::size_t>& cols) {
    IncidenceMatrix out;
    const std::size_t kz = cols.size();
    out.names.reserve(kz);
    for (std::size_t c : cols) out.names.push_back(ds.feature_names()[c]);

    out.scaler.mean.assign(kz, 0.0);
    out.scaler.scale.assign(kz, 1.0);
    const double n = static_cast<double>(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        for (std::size_t j = 0; j < kz; ++j) out.scaler.mean[j] += row[cols[j]];
    }
    for (std::size_t j = 0; j < kz; ++j) out.scaler.mean[j] /= n;
    std::vector<double> ss(kz, 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        for (std::size_t j = 0; j < kz; ++j) {
            double d = row[cols[j]] - out.scaler.mean[j];
            ss[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < kz; ++j) {
        double sd = std::sqrt(ss[j] / n);
        out.scaler.scale[j] = sd > 0.0 ? sd : 1.0;
    }

    out.values.resize(ds.size() * kz);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        for (std::size_t j = 0; j < kz; ++j) {
            out.values[i * kz + j] = (row[cols[j]] - out.scaler.mean[j]) / out.scaler.scale[j];
        }
    }
    return out;
}

}  // namespace

double mixture_survivor(double pi, double latency_survival) {
    return pi * latency_survival + (1.0 - pi);
}

double MixtureCureModel::incidence_probability(std::span<const double> raw_z) const {
    double eta = b[0];
    for (std::size_t j = 0; j < incidence_scaler.size(); ++j) {
        eta += b[j + 1] * (raw_z[j] - incidence_scaler.mean[j]) / incidence_scaler.scale[j];
    }
    return sigmoid(eta);
}

double MixtureCureModel::latency_relative_hazard(std::span<const double> raw_x) const {
    double eta = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        eta += beta[j] * (raw_x[j] - latency_scaler.mean[j]) / latency_scaler.scale[j];
    }
    return std::exp(eta);
}

std::vector<double> MixtureCureModel::incidence_row(
    std::span<const double> raw_features, const std::vector<std::string>& names) const {
    std::vector<double> z;
    z.reserve(incidence_feature_names.size());
    for (const std::string& want : incidence_feature_names) {
        auto it = std::find(names.begin(), names.end(), want);
        if (it == names.end()) throw DataError("feature '" + want + "' missing from record");
        z.push_back(raw_features[static_cast<std::size_t>(it - names.begin())]);
    }
    return z;
}

std::vector<double> MixtureCureModel::raw_incidence_coefficients() const {
    std::vector<double> raw(b.size());
    double intercept = b[0];
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        raw[j + 1] = b[j + 1] / incidence_scaler.scale[j];
        intercept -= b[j + 1] * incidence_scaler.mean[j] / incidence_scaler.scale[j];
    }
    raw[0] = intercept;
    return raw;
}

std::vector<double> MixtureCureModel::raw_latency_coefficients() const {
    std::vector<double> raw(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) raw[j] = beta[j] / latency_scaler.scale[j];
    return raw;
}

std::vector<double> e_step(const SurvivalDataset& ds, const MixtureCureModel& model) {
    std::vector<double> weights(ds.size(), 1.0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.event(i)) continue;
        auto row = ds.row(i);
        double pi = model.incidence_probability(model.incidence_row(row, ds.feature_names()));
        double psi = model.latency_relative_hazard(row);
        double surv = std::exp(-model.baseline.cum_hazard_at(ds.duration(i)) * psi);
        double prone_mass = pi * surv;
        weights[i] = prone_mass / (prone_mass + (1.0 - pi));
    }
    return weights;
}

MixtureCureModel fit_mixture_cure(const SurvivalDataset& ds, const MixtureCureConfig& config) {
    if (ds.empty()) throw FitError("cannot fit on an empty dataset");
    const std::size_t n = ds.size();
    const std::size_t d = ds.n_events();
    if (d == 0) throw FitError("mixture cure model needs at least one event");
    if (d == n) {
        std::cerr << "warning: no censored rows; mixture collapses to plain CoxPH\n";
    }

    MixtureCureModel model;
    model.feature_names = ds.feature_names();
    model.censoring_window = ds.censoring_window();
    model.latency_scaler = FeatureScaler::fit(ds);

    auto cols = incidence_columns(ds, config);
    IncidenceMatrix z = build_incidence_matrix(ds, cols);
    model.incidence_feature_names = z.names;
    model.incidence_scaler = z.scaler;
    const std::size_t kz = cols.size();
    const std::size_t kx = ds.n_features();

    CoxDesign design(ds, model.latency_scaler.apply_all(ds));
    detail::GlmDesign z_design{&z.values, n, kz};

    // initialization: b from a logistic fit of the event indicator, beta = 0
    std::vector<double> delta(n);
    for (std::size_t i = 0; i < n; ++i) delta[i] = ds.event(i) ? 1.0 : 0.0;
    auto init_fit =
        detail::fit_logistic_fractional(z_design, delta, config.incidence_penalty, config.newton);
    std::vector<double> b = init_fit.coef;
    model.ridge_fallback = init_fit.ridge_fallback;
    std::vector<double> beta(kx, 0.0);

    std::vector<double> weights(n, 1.0);
    auto hazard = design.breslow_steps(design.linear_predictor(beta), weights);

    // per-row incidence linear predictor
    auto pi_of = [&](std::size_t i) {
        const double* zrow = z.values.data() + i * kz;
        double eta = b[0];
        for (std::size_t j = 0; j < kz; ++j) eta += b[j + 1] * zrow[j];
        return sigmoid(eta);
    };

    auto cum_hazard_at = [&](double t) {
        auto it = std::upper_bound(hazard.times.begin(), hazard.times.end(), t);
        if (it == hazard.times.begin()) return 0.0;
        return hazard.cum_hazard[static_cast<std::size_t>(it - hazard.times.begin()) - 1];
    };

    std::vector<double> eta = design.linear_predictor(beta);
    std::vector<double> pf_b;  // penalty factors: intercept free
    pf_b.assign(kz + 1, 1.0);
    pf_b[0] = 0.0;

    double previous_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        // E-step
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.event(i)) {
                weights[i] = 1.0;
                continue;
            }
            double pi = pi_of(i);
            double surv = std::exp(-cum_hazard_at(ds.duration(i)) * std::exp(eta[i]));
            double prone_mass = pi * surv;
            weights[i] = prone_mass / (prone_mass + (1.0 - pi));
        }

        // M-step: incidence
        auto b_fit = detail::fit_logistic_fractional(z_design, weights, config.incidence_penalty,
                                                     config.newton, b);
        b = std::move(b_fit.coef);
        model.ridge_fallback = model.ridge_fallback || b_fit.ridge_fallback;

        // M-step: latency (weighted Cox, warm-started)
        auto cox_eval = [&](std::span<const double> beta_try) {
            auto deriv = design.derivatives(beta_try, weights);
            return SmoothEval{deriv.value, std::move(deriv.gradient), std::move(deriv.hessian)};
        };
        NewtonResult cox_fit =
            maximize_penalized(cox_eval, beta, config.latency_penalty, {}, config.newton);
        beta = std::move(cox_fit.beta);
        eta = design.linear_predictor(beta);

        // M-step: baseline
        hazard = design.breslow_steps(eta, weights);

        // observed-data log-likelihood under the discrete-hazard baseline
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pi = pi_of(i);
            double psi = std::exp(eta[i]);
            double h_at = cum_hazard_at(ds.duration(i));
            if (ds.event(i)) {
                auto it = std::lower_bound(hazard.times.begin(), hazard.times.end(),
                                           ds.duration(i));
                std::size_t idx = static_cast<std::size_t>(it - hazard.times.begin());
                double increment =
                    idx == 0 ? hazard.cum_hazard[0]
                             : hazard.cum_hazard[idx] - hazard.cum_hazard[idx - 1];
                ll += std::log(pi) + std::log(increment * psi) - h_at * psi;
            } else {
                ll += std::log(pi * std::exp(-h_at * psi) + (1.0 - pi));
            }
        }
        ll -= config.incidence_penalty.value(b, pf_b);
        ll -= config.latency_penalty.value(beta, {});

        model.em_trace.push_back(ll);
        model.iterations = iter;
        if (std::fabs(ll - previous_ll) < config.tol) break;
        previous_ll = ll;
    }

    model.b = std::move(b);
    model.beta = std::move(beta);
    model.baseline = StepSurvivalCurve::from_cum_hazard(std::move(hazard.times),
                                                        std::move(hazard.cum_hazard));
    return model;
}

EngagementCall classify_engagement(const MixtureCureModel& model, std::span<const double> raw_z,
                                   double threshold) {
    double pi = model.incidence_probability(raw_z);
    return {pi, pi >= threshold};
}

}  // namespace surv
