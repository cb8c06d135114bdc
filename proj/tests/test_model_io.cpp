#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "surv/censoring.hpp"
#include "surv/errors.hpp"
#include "surv/evaluation.hpp"
#include "surv/model_io.hpp"
#include "surv/simgen.hpp"

using namespace surv;

namespace {

SurvivalDataset training_data() {
    GeneratorConfig config;
    config.n_recipients = 250;
    config.n_emails_per_recipient = 6;
    config.seed = 77;
    auto campaign = generate(config);
    return apply_censoring(campaign.log, 360.0);
}

/// Round-trip invariance: a reloaded model scores every row identically.
void check_roundtrip(const ModelSpec& spec, const SurvivalDataset& ds) {
    auto dir = testutil::temp_dir("model_io_" + spec.name);
    FittedModel model = fit_model(spec, ds);
    auto path = (dir / "model.json").string();
    save_model_json(model, spec, path);
    LoadedModel loaded = load_model_json(path);

    std::vector<double> percentiles{5, 50};
    auto before = score_dataset(model, ds, percentiles);
    auto after = score_dataset(loaded.model, ds, percentiles);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].open_probability_at_window == after[i].open_probability_at_window);
        CHECK(before[i].t_hat == after[i].t_hat);
    }
    CHECK(loaded.spec.name == spec.name);
}

}  // namespace

TEST_CASE("every model variant survives a serialization round-trip") {
    auto ds = training_data();

    ModelSpec spec;
    spec.name = "b";
    spec.kind = ModelKind::OpenRate;
    check_roundtrip(spec, ds);

    spec.name = "lr";
    spec.kind = ModelKind::Regression;
    spec.penalty = {1e-3, 0.5};
    check_roundtrip(spec, ds);

    spec.name = "cph-l";
    spec.kind = ModelKind::CoxLinear;
    check_roundtrip(spec, ds);

    spec.name = "cph-g";
    spec.kind = ModelKind::CoxBoost;
    spec.boost.n_trees = 15;
    spec.boost.min_obs_per_leaf = 25;
    check_roundtrip(spec, ds);

    spec.name = "mm";
    spec.kind = ModelKind::MixtureCure;
    check_roundtrip(spec, ds);
}

TEST_CASE("model container rejects foreign and stale files") {
    auto dir = testutil::temp_dir("model_io_bad");
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name);
        out << text;
        return (dir / name).string();
    };
    CHECK_THROWS_AS(load_model_json(write("x.json", "{\"format\":\"other\"}")), DataError);
    CHECK_THROWS_AS(load_model_json(write("y.json", "not json")), DataError);
    CHECK_THROWS_AS(
        load_model_json(write(
            "z.json", "{\"format\":\"survmail.model\",\"version\":99,\"type\":\"baseline\"}")),
        DataError);
    CHECK_THROWS_AS(load_model_json((dir / "missing.json").string()), DataError);
}

TEST_CASE("spec files round-trip") {
    auto dir = testutil::temp_dir("spec_io");
    ModelSpec spec;
    spec.name = "cph-g";
    spec.kind = ModelKind::CoxBoost;
    spec.boost.n_trees = 123;
    spec.boost.learning_rate = 0.07;
    spec.seed = 42;
    auto path = (dir / "spec.json").string();
    save_spec_json(spec, path, "test");
    ModelSpec loaded = load_spec_json(path);
    CHECK(loaded.name == spec.name);
    CHECK(loaded.boost.n_trees == 123);
    CHECK(loaded.boost.learning_rate == 0.07);
    CHECK(loaded.seed == 42);
}

TEST_CASE("mixture config with explicit incidence columns round-trips") {
    auto ds = training_data();
    ModelSpec spec;
    spec.name = "mm";
    spec.kind = ModelKind::MixtureCure;
    spec.mixture.incidence_features = std::vector<std::string>{"open_rate", "last_opened"};
    check_roundtrip(spec, ds);

    auto dir = testutil::temp_dir("spec_mm");
    auto path = (dir / "spec.json").string();
    save_spec_json(spec, path);
    ModelSpec loaded = load_spec_json(path);
    REQUIRE(loaded.mixture.incidence_features.has_value());
    CHECK(loaded.mixture.incidence_features->size() == 2);
}
