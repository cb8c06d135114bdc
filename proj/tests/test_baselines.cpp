#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "surv/baselines.hpp"
#include "surv/errors.hpp"
#include "surv/evaluation.hpp"

using namespace surv;

namespace {

// logistic log-likelihood on raw features for the finite-difference oracle
double logistic_ll(const SurvivalDataset& ds, const std::vector<double>& coef,
                   const FeatureScaler& scaler) {
    double ll = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        double eta = coef[0];
        for (std::size_t j = 0; j < row.size(); ++j) {
            eta += coef[j + 1] * (row[j] - scaler.mean[j]) / scaler.scale[j];
        }
        double y = ds.event(i) ? 1.0 : 0.0;
        ll += y * eta - std::log1p(std::exp(-std::fabs(eta))) - std::max(eta, 0.0);
    }
    return ll;
}

}  // namespace

TEST_CASE("fit_logistic") {
    SUBCASE("perfectly separable data with a ridge floor reaches AUC 1") {
        std::vector<double> durations;
        std::vector<bool> events;
        std::vector<std::vector<double>> x;
        for (int i = 0; i < 20; ++i) {
            bool event = i < 10;
            durations.push_back(event ? 5.0 : 100.0);
            events.push_back(event);
            x.push_back({event ? 1.0 + 0.1 * i : -1.0 - 0.1 * i});
        }
        auto ds = testutil::make_dataset(durations, events, 100, x);
        auto model = fit_logistic(ds, {1e-4, 0.0});

        std::vector<double> scores;
        std::vector<unsigned char> labels;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            scores.push_back(
                predict_baseline(model, ds.record(i), ds.feature_names()).open_probability);
            labels.push_back(ds.event(i) ? 1 : 0);
        }
        CHECK(auc(scores, labels) == doctest::Approx(1.0));
    }
    SUBCASE("intercept-only data recovers the base rate") {
        std::vector<double> durations;
        std::vector<bool> events;
        for (int i = 0; i < 100; ++i) {
            bool event = i < 30;
            durations.push_back(event ? 5.0 : 100.0);
            events.push_back(event);
        }
        auto ds = testutil::make_dataset(durations, events, 100);  // constant zero feature
        auto model = fit_logistic(ds);
        auto p = predict_baseline(model, ds.record(0), ds.feature_names()).open_probability;
        CHECK(p == doctest::Approx(0.3).epsilon(1e-6));
    }
    SUBCASE("single-class data is rejected") {
        auto ds = testutil::make_dataset({1, 2}, {true, true}, 10);
        CHECK_THROWS_AS(fit_logistic(ds), FitError);
    }
    SUBCASE("gradient at the fit matches finite differences") {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> durations;
        std::vector<bool> events;
        std::vector<std::vector<double>> x;
        for (int i = 0; i < 120; ++i) {
            double v = normal(rng);
            bool event = unit(rng) < 1.0 / (1.0 + std::exp(-v));
            durations.push_back(event ? 5.0 : 100.0);
            events.push_back(event);
            x.push_back({v, normal(rng)});
        }
        auto ds = testutil::make_dataset(durations, events, 100, x);
        auto model = fit_logistic(ds);
        auto fd = testutil::finite_difference_gradient(
            [&](const std::vector<double>& c) { return logistic_ll(ds, c, model.scaler); },
            model.coefficients);
        for (double g : fd) CHECK(std::fabs(g) <= 1e-4);  // stationary point
    }
}

TEST_CASE("fit_linear_time") {
    SUBCASE("constant durations produce an intercept-only fit") {
        auto ds = testutil::make_dataset({60, 60, 60, 100}, {true, true, true, false}, 100,
                                         {{1.0}, {2.0}, {3.0}, {4.0}});
        auto model = fit_linear_time(ds);
        auto p = predict_baseline(model, ds.record(3), ds.feature_names());
        CHECK(p.predicted_minutes == doctest::Approx(60.0).epsilon(1e-9));
    }
    SUBCASE("noise-free log-linear data reaches MRAD(O) of zero") {
        std::vector<double> durations;
        std::vector<bool> events;
        std::vector<std::vector<double>> x;
        for (int i = 0; i < 30; ++i) {
            double v = -1.0 + i * 0.1;
            durations.push_back(std::exp(3.0 + 0.5 * v));
            events.push_back(true);
            x.push_back({v});
        }
        auto ds = testutil::make_dataset(durations, events, 1000, x);
        auto model = fit_linear_time(ds);

        std::vector<double> actual;
        std::vector<double> predicted;
        std::vector<unsigned char> flags;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            actual.push_back(ds.duration(i));
            predicted.push_back(
                predict_baseline(model, ds.record(i), ds.feature_names()).predicted_minutes);
            flags.push_back(1);
        }
        CHECK(mrad(actual, predicted, MradMode::ObservedOnly, flags) <= 1e-10);
    }
    SUBCASE("predictions clamp into (epsilon, C]") {
        auto ds = testutil::make_dataset({600, 700, 720}, {true, true, false}, 720,
                                         {{0.0}, {0.0}, {0.0}});
        auto model = fit_linear_time(ds);
        model.coefficients[0] = std::log(900.0);  // force a 900-minute prediction
        auto p = predict_baseline(model, ds.record(0), ds.feature_names());
        CHECK(p.predicted_minutes == 720.0);
    }
    SUBCASE("censored rows do not change the fit") {
        std::vector<double> durations{10, 20, 40, 80};
        std::vector<bool> events{true, true, true, true};
        std::vector<std::vector<double>> x{{0.0}, {1.0}, {2.0}, {3.0}};
        auto events_only = testutil::make_dataset(durations, events, 100, x);
        auto with_censored = testutil::make_dataset({10, 20, 40, 80, 100, 100},
                                                    {true, true, true, true, false, false}, 100,
                                                    {{0.0}, {1.0}, {2.0}, {3.0}, {9.0}, {-9.0}});
        auto m1 = fit_linear_time(events_only);
        auto m2 = fit_linear_time(with_censored);
        for (std::size_t j = 0; j < m1.coefficients.size(); ++j) {
            CHECK(m1.coefficients[j] == doctest::Approx(m2.coefficients[j]).epsilon(1e-12));
        }
    }
    SUBCASE("raw-time switch regresses untransformed durations") {
        auto ds = testutil::make_dataset({10, 30, 50}, {true, true, true}, 100,
                                         {{1.0}, {3.0}, {5.0}});
        auto model = fit_linear_time(ds, {}, /*log_time=*/false);
        auto p = predict_baseline(model, ds.record(1), ds.feature_names());
        CHECK(p.predicted_minutes == doctest::Approx(30.0).epsilon(1e-8));
    }
    SUBCASE("needs two event rows") {
        auto ds = testutil::make_dataset({10, 100}, {true, false}, 100);
        CHECK_THROWS_AS(fit_linear_time(ds), FitError);
    }
}

TEST_CASE("predict_baseline variants") {
    auto ds = testutil::make_dataset({60, 180}, {true, false}, 180, {{0.62}, {0.25}},
                                     {"open_rate"});
    SUBCASE("constant time returns the censoring window") {
        auto model = make_constant_time_baseline(ds);
        auto p = predict_baseline(model, ds.record(0), ds.feature_names());
        CHECK(p.predicted_minutes == 180.0);
    }
    SUBCASE("open rate passes the historical rate through") {
        auto model = make_open_rate_baseline(ds);
        auto p = predict_baseline(model, ds.record(0), ds.feature_names());
        CHECK(p.open_probability == 0.62);
        CHECK(p.predicted_minutes == 180.0);
    }
    SUBCASE("missing open-rate feature is an error") {
        auto no_rate = testutil::make_dataset({60, 180}, {true, false}, 180);
        CHECK_THROWS_AS(make_open_rate_baseline(no_rate), FitError);
        auto model = make_open_rate_baseline(ds);
        CHECK_THROWS_AS(
            predict_baseline(model, no_rate.record(0), no_rate.feature_names()), DataError);
    }
    SUBCASE("zero-coefficient logistic scores one half") {
        BaselineModel model;
        model.variant = BaselineVariant::Logistic;
        model.feature_names = ds.feature_names();
        model.scaler = FeatureScaler::fit(ds);
        model.coefficients = {0.0, 0.0};
        model.constant_minutes = 180.0;
        auto p = predict_baseline(model, ds.record(0), ds.feature_names());
        CHECK(p.open_probability == 0.5);
    }
}

TEST_CASE("logistic and cox rankings agree on one monotone feature") {
    std::vector<double> durations;
    std::vector<bool> events;
    std::vector<std::vector<double>> x;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double v = unit(rng);
        bool event = unit(rng) < v;  // higher feature, more opens
        durations.push_back(event ? 1.0 + 50.0 * unit(rng) : 100.0);
        events.push_back(event);
        x.push_back({v});
    }
    auto ds = testutil::make_dataset(durations, events, 100, x);
    auto logistic = fit_logistic(ds);
    auto cox = fit_cox_linear(ds);

    // both score monotonically in the feature, so rankings coincide
    std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        SurvivalRecord low{"a", {grid[i - 1]}, 0, false};
        SurvivalRecord high{"b", {grid[i]}, 0, false};
        double p_low = predict_baseline(logistic, low, ds.feature_names()).open_probability;
        double p_high = predict_baseline(logistic, high, ds.feature_names()).open_probability;
        CHECK(p_low <= p_high);
        CHECK(cox.relative_hazard(low.features) <= cox.relative_hazard(high.features));
    }
}
