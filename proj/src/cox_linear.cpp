#include "surv/cox_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surv/cox_design.hpp"
#include "surv/errors.hpp"
#include "surv/nonparametric.hpp"
#include "surv/special.hpp"

namespace surv {

double CoxLinearModel::relative_hazard(std::span<const double> raw_features) const {
    double eta = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        eta += beta[j] * (raw_features[j] - scaler.mean[j]) / scaler.scale[j];
    }
    return std::exp(eta);
}

std::vector<double> CoxLinearModel::raw_coefficients() const {
    std::vector<double> raw(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) raw[j] = beta[j] / scaler.scale[j];
    return raw;
}

double partial_log_likelihood(const SurvivalDataset& ds, std::span<const double> beta) {
    CoxDesign design(ds);
    for (double b : beta) {
        if (!std::isfinite(b)) throw DataError("coefficients must be finite");
    }
    return design.partial_log_likelihood(design.linear_predictor(beta));
}

std::vector<double> partial_ll_gradient(const SurvivalDataset& ds, std::span<const double> beta) {
    CoxDesign design(ds);
    return design.derivatives(beta).gradient;
}

CoxLinearModel fit_cox_linear(const SurvivalDataset& ds, const ElasticNetPenalty& penalty,
                              const CoxFitConfig& config) {
    if (ds.empty()) throw FitError("cannot fit on an empty dataset");
    if (ds.n_events() == 0) throw FitError("cannot fit a Cox model without events");
    if (penalty.lambda < 0.0 || penalty.alpha < 0.0 || penalty.alpha > 1.0) {
        throw FitError("invalid Elastic-Net penalty");
    }

    CoxLinearModel model;
    model.feature_names = ds.feature_names();
    model.scaler = FeatureScaler::fit(ds);
    model.penalty = penalty;
    model.censoring_window = ds.censoring_window();

    CoxDesign design(ds, model.scaler.apply_all(ds));
    auto eval = [&](std::span<const double> beta) {
        auto d = design.derivatives(beta);
        return SmoothEval{d.value, std::move(d.gradient), std::move(d.hessian)};
    };

    NewtonResult result = maximize_penalized(eval, std::vector<double>(ds.n_features(), 0.0),
                                             penalty, {}, config.newton);

    model.beta = std::move(result.beta);
    model.iterations = result.iterations;
    model.final_gradient_norm = result.gradient_norm;

    std::vector<double> psi(ds.size());
    auto eta = design.linear_predictor(model.beta);
    for (std::size_t i = 0; i < ds.size(); ++i) psi[i] = std::exp(eta[i]);
    model.baseline = breslow_baseline(ds, psi);
    return model;
}

bool ProportionalityReport::all_pass() const {
    if (insufficient) return false;
    for (const auto& f : features) {
        if (f.p_value < significance_level) return false;
    }
    return true;
}

ProportionalityReport schoenfeld_residuals(const SurvivalDataset& ds, const CoxLinearModel& model,
                                           double significance_level) {
    if (model.beta.size() != ds.n_features()) {
        throw DataError("model was fitted with a different feature count");
    }

    ProportionalityReport report;
    report.significance_level = significance_level;

    const std::size_t k = ds.n_features();
    CoxDesign design(ds);  // residuals live on the raw feature scale
    std::vector<double> eta(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        eta[i] = std::log(model.relative_hazard(ds.row(i)));
    }
    auto means = design.event_feature_means(eta);
    const std::size_t m = means.rows.size();

    report.features.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto& trend = report.features[j];
        trend.feature = ds.feature_names()[j];
        trend.event_times.reserve(m);
        trend.residuals.reserve(m);
    }
    for (std::size_t e = 0; e < m; ++e) {
        std::size_t i = means.rows[e];
        auto row = ds.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            double r = row[j] - means.means[e * k + j];
            report.features[j].event_times.push_back(ds.duration(i));
            report.features[j].residuals.push_back(r);
            report.features[j].residual_sum += r;
        }
    }

    if (m < 3) {
        report.insufficient = true;
        return report;
    }

    // time transform g(t) = 1 - KM(t), the usual surrogate rank for event time
    StepSurvivalCurve km = kaplan_meier(ds);
    std::vector<double> g(m);
    for (std::size_t e = 0; e < m; ++e) {
        g[e] = 1.0 - km.survival_at(report.features[0].event_times[e]);
    }
    double g_mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(m);
    double g_ss = 0.0;
    for (double v : g) g_ss += (v - g_mean) * (v - g_mean);

    for (std::size_t j = 0; j < k; ++j) {
        auto& trend = report.features[j];
        double r_mean =
            std::accumulate(trend.residuals.begin(), trend.residuals.end(), 0.0) /
            static_cast<double>(m);
        double r_ss = 0.0;
        double cross = 0.0;
        for (std::size_t e = 0; e < m; ++e) {
            double dr = trend.residuals[e] - r_mean;
            r_ss += dr * dr;
            cross += dr * (g[e] - g_mean);
        }
        if (r_ss <= 0.0 || g_ss <= 0.0) {
            trend.correlation = 0.0;
            trend.p_value = 1.0;
            continue;
        }
        double r = cross / std::sqrt(r_ss * g_ss);
        r = std::clamp(r, -1.0, 1.0);
        trend.correlation = r;
        double df = static_cast<double>(m) - 2.0;
        double denom = 1.0 - r * r;
        if (denom <= 0.0) {
            trend.p_value = 0.0;
        } else {
            double t = r * std::sqrt(df / denom);
            trend.p_value = student_t_two_sided_p(t, df);
        }
    }
    return report;
}

}  // namespace surv
