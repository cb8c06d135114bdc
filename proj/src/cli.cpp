#include "surv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "surv/censoring.hpp"
#include "surv/csv.hpp"
#include "surv/errors.hpp"
#include "surv/evaluation.hpp"
#include "surv/model_io.hpp"
#include "surv/nonparametric.hpp"
#include "surv/simgen.hpp"

namespace surv {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kCliVersion = "1.0.0";

void print_summary(const json& summary) { std::cout << summary.dump() << "\n"; }

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const json& extra = json::object()) {
    json doc{{"format", "survmail.manifest"},
             {"version", kCliVersion},
             {"command", command},
             {"config", config}};
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
    out << doc.dump(2) << "\n";
}

ModelKind kind_of(const std::string& name) {
    if (name == "b") return ModelKind::OpenRate;
    if (name == "lr") return ModelKind::Regression;
    if (name == "cph-l") return ModelKind::CoxLinear;
    if (name == "cph-g") return ModelKind::CoxBoost;
    if (name == "mm") return ModelKind::MixtureCure;
    throw DataError("unknown model '" + name + "' (expected b, lr, cph-l, cph-g or mm)");
}

ModelSpec default_spec(const std::string& name) {
    ModelSpec spec;
    spec.name = name;
    spec.kind = kind_of(name);
    return spec;
}

/// Search artifacts override defaults: spec_<name>_w<window>.json first,
/// then spec_<name>.json.
ModelSpec resolve_spec(const std::string& name, double window, const std::string& specs_dir) {
    if (!specs_dir.empty()) {
        fs::path per_window =
            fs::path(specs_dir) / ("spec_" + name + "_w" + std::to_string(static_cast<int>(window)) +
                                   ".json");
        if (fs::exists(per_window)) return load_spec_json(per_window.string());
        fs::path generic = fs::path(specs_dir) / ("spec_" + name + ".json");
        if (fs::exists(generic)) return load_spec_json(generic.string());
    }
    return default_spec(name);
}

json spec_summary(const ModelSpec& spec) {
    json j{{"name", spec.name}};
    switch (spec.kind) {
        case ModelKind::Regression:
        case ModelKind::CoxLinear:
            j["lambda"] = spec.penalty.lambda;
            j["alpha"] = spec.penalty.alpha;
            break;
        case ModelKind::CoxBoost:
            j["n_trees"] = spec.boost.n_trees;
            j["learning_rate"] = spec.boost.learning_rate;
            j["min_obs_per_leaf"] = spec.boost.min_obs_per_leaf;
            break;
        default:
            break;
    }
    return j;
}

RawEventLog concat_logs(const RawEventLog& a, const RawEventLog& b) {
    if (a.feature_names != b.feature_names) {
        throw DataError("cannot combine logs with different feature columns");
    }
    RawEventLog out = a;
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    return out;
}

void write_predictions_csv(const std::vector<PredictionRow>& rows,
                           std::span<const double> percentiles, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "individual_id,open_probability";
    for (double p : percentiles) out << ",t_hat_p" << p;
    out << ",actual_duration,actual_event\n";
    char buf[64];
    for (const auto& row : rows) {
        out << row.individual_id;
        std::snprintf(buf, sizeof(buf), ",%.17g", row.open_probability_at_window);
        out << buf;
        for (double t : row.t_hat) {
            std::snprintf(buf, sizeof(buf), ",%.17g", t);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g,%d\n", row.actual_duration,
                      row.actual_event ? 1 : 0);
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int cmd_generate(CLI::App& app) {
    auto config = std::make_shared<GeneratorConfig>();
    auto out_dir = std::make_shared<std::string>();
    auto scheme = std::make_shared<SplitScheme>();

    app.add_option("--out", *out_dir, "output directory")->required();
    app.add_option("--seed", config->seed, "generator seed");
    app.add_option("--recipients", config->n_recipients, "number of recipients");
    app.add_option("--emails-per-recipient", config->n_emails_per_recipient,
                   "emails per recipient inside the span");
    app.add_option("--span-weeks", config->span_weeks, "campaign span in weeks");
    app.add_option("--monitor-horizon", config->monitor_horizon_minutes,
                   "open monitoring horizon in minutes");
    app.add_option("--cure-intercept", config->true_b[0], "incidence intercept");
    app.add_option("--cure-slope", config->true_b[1], "incidence trait coefficient");
    app.add_option("--cure-cap", config->pi_cap, "proneness ceiling");

    app.callback([=]() {
        fs::create_directories(*out_dir);
        GeneratedCampaign campaign = generate(*config);
        fs::path dir(*out_dir);

        save_csv(campaign.log, (dir / "events.csv").string());
        save_truth_csv(campaign.truth, (dir / "truth.csv").string());

        ChronologicalSplit split = split_chronological(campaign.log, *scheme);
        save_csv(split.train, (dir / "train.csv").string());
        save_csv(split.validate, (dir / "validate.csv").string());
        save_csv(split.test, (dir / "test.csv").string());

        std::size_t opens = 0;
        for (const auto& row : campaign.log.rows) opens += row.open_ts ? 1 : 0;

        json config_echo{{"seed", config->seed},
                         {"recipients", config->n_recipients},
                         {"emails_per_recipient", config->n_emails_per_recipient},
                         {"span_weeks", config->span_weeks},
                         {"monitor_horizon_minutes", config->monitor_horizon_minutes},
                         {"true_b", config->true_b},
                         {"pi_cap", config->pi_cap},
                         {"true_beta", config->true_beta},
                         {"baseline_knots", config->baseline.knots},
                         {"baseline_rates", config->baseline.rates}};
        write_manifest(dir, "generate", config_echo);
        print_summary(json{{"command", "generate"},
                           {"ok", true},
                           {"rows", campaign.log.rows.size()},
                           {"opens", opens},
                           {"train_rows", split.train.rows.size()},
                           {"validate_rows", split.validate.rows.size()},
                           {"test_rows", split.test.rows.size()},
                           {"seed", config->seed},
                           {"artifacts",
                            json::array({(dir / "events.csv").string(),
                                         (dir / "truth.csv").string(),
                                         (dir / "train.csv").string(),
                                         (dir / "validate.csv").string(),
                                         (dir / "test.csv").string()})}});
    });
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitFlags {
    std::string data;
    std::string model = "cph-l";
    double window = 720.0;
    std::string out = "model.json";
    double lambda = 0.0;
    double alpha = 1.0;
    int trees = 200;
    double learning_rate = 0.05;
    int min_obs = 50;
    int depth = 3;
    std::uint64_t seed = 0;
};

int cmd_fit(CLI::App& app) {
    auto flags = std::make_shared<FitFlags>();
    app.add_option("--data", flags->data, "training CSV")->required();
    app.add_option("--model", flags->model, "b | lr | cph-l | cph-g | mm");
    app.add_option("--window", flags->window, "censoring window in minutes");
    app.add_option("--out", flags->out, "model output path");
    app.add_option("--lambda", flags->lambda, "Elastic-Net strength");
    app.add_option("--alpha", flags->alpha, "Elastic-Net L1/L2 mix");
    app.add_option("--trees", flags->trees, "boosting stages");
    app.add_option("--learning-rate", flags->learning_rate, "boosting shrinkage");
    app.add_option("--min-obs", flags->min_obs, "min observations per leaf");
    app.add_option("--depth", flags->depth, "tree depth");
    app.add_option("--seed", flags->seed, "fit seed");

    app.callback([=]() {
        ModelSpec spec = default_spec(flags->model);
        spec.penalty = {flags->lambda, flags->alpha};
        spec.boost.n_trees = flags->trees;
        spec.boost.learning_rate = flags->learning_rate;
        spec.boost.min_obs_per_leaf = flags->min_obs;
        spec.boost.max_depth = flags->depth;
        spec.seed = flags->seed;

        RawEventLog log = load_csv(flags->data);
        SurvivalDataset ds = apply_censoring(log, flags->window);
        FittedModel model = fit_model(spec, ds);
        save_model_json(model, spec, flags->out);

        print_summary(json{{"command", "fit"},
                           {"ok", true},
                           {"model", flags->model},
                           {"window_minutes", flags->window},
                           {"rows", ds.size()},
                           {"events", ds.n_events()},
                           {"spec", spec_summary(spec)},
                           {"artifacts", json::array({flags->out})}});
    });
    return 0;
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

struct DiagnoseFlags {
    std::string data;
    double window = 720.0;
    std::string out;
    double lambda = 0.0;
    double alpha = 1.0;
    double significance = 0.05;
};

int cmd_diagnose(CLI::App& app) {
    auto flags = std::make_shared<DiagnoseFlags>();
    app.add_option("--data", flags->data, "input CSV")->required();
    app.add_option("--window", flags->window, "censoring window in minutes");
    app.add_option("--out", flags->out, "output directory")->required();
    app.add_option("--lambda", flags->lambda, "Elastic-Net strength for the CoxPH fit");
    app.add_option("--alpha", flags->alpha, "Elastic-Net mix for the CoxPH fit");
    app.add_option("--significance", flags->significance, "trend-test significance level");

    app.callback([=]() {
        fs::path dir(flags->out);
        fs::create_directories(dir);

        RawEventLog log = load_csv(flags->data);
        SurvivalDataset ds = apply_censoring(log, flags->window);

        // proportional-hazards check on a CoxPH fit
        CoxLinearModel cox = fit_cox_linear(ds, {flags->lambda, flags->alpha});
        ProportionalityReport report = schoenfeld_residuals(ds, cox, flags->significance);
        {
            std::ofstream out(dir / "schoenfeld_residuals.csv");
            out << "feature,event_time,residual\n";
            char buf[160];
            for (const auto& f : report.features) {
                for (std::size_t e = 0; e < f.residuals.size(); ++e) {
                    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", f.feature.c_str(),
                                  f.event_times[e], f.residuals[e]);
                    out << buf;
                }
            }
        }
        {
            std::ofstream out(dir / "proportionality.csv");
            out << "feature,correlation,p_value,pass\n";
            char buf[160];
            for (const auto& f : report.features) {
                std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d\n", f.feature.c_str(),
                              f.correlation, f.p_value,
                              f.p_value >= flags->significance ? 1 : 0);
                out << buf;
            }
        }

        // engagement grouping: logistic scores split at their median, then
        // the two groups' survivor curves and a log-rank test
        BaselineModel logistic = fit_logistic(ds, {flags->lambda, flags->alpha});
        std::vector<double> scores(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            scores[i] =
                predict_baseline(logistic, ds.record(i), ds.feature_names()).open_probability;
        }
        std::vector<double> sorted_scores = scores;
        std::nth_element(sorted_scores.begin(), sorted_scores.begin() + sorted_scores.size() / 2,
                         sorted_scores.end());
        double median = sorted_scores[sorted_scores.size() / 2];

        std::vector<std::size_t> engaged_rows;
        std::vector<std::size_t> disengaged_rows;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            (scores[i] >= median ? engaged_rows : disengaged_rows).push_back(i);
        }
        if (engaged_rows.empty() || disengaged_rows.empty()) {
            throw FitError("engagement grouping produced an empty group");
        }
        SurvivalDataset engaged = ds.subset(engaged_rows);
        SurvivalDataset disengaged = ds.subset(disengaged_rows);

        save_curve_csv(kaplan_meier(ds), (dir / "km_combined.csv").string());
        save_curve_csv(kaplan_meier(engaged), (dir / "km_engaged.csv").string());
        save_curve_csv(kaplan_meier(disengaged), (dir / "km_disengaged.csv").string());
        LogRankResult lr = log_rank_test(engaged, disengaged);

        json config_echo{{"data", flags->data},
                         {"window_minutes", flags->window},
                         {"lambda", flags->lambda},
                         {"alpha", flags->alpha},
                         {"significance", flags->significance}};
        json trends = json::array();
        for (const auto& f : report.features) {
            trends.push_back(json{{"feature", f.feature},
                                  {"correlation", f.correlation},
                                  {"p_value", f.p_value},
                                  {"pass", f.p_value >= flags->significance}});
        }
        write_manifest(dir, "diagnose", config_echo,
                       json{{"log_rank_statistic", lr.statistic},
                            {"log_rank_p_value", lr.p_value},
                            {"proportionality_all_pass", report.all_pass()},
                            {"trends", trends}});

        print_summary(json{{"command", "diagnose"},
                           {"ok", true},
                           {"proportionality_all_pass", report.all_pass()},
                           {"log_rank_statistic", lr.statistic},
                           {"log_rank_p_value", lr.p_value},
                           {"artifacts",
                            json::array({(dir / "schoenfeld_residuals.csv").string(),
                                         (dir / "proportionality.csv").string(),
                                         (dir / "km_combined.csv").string(),
                                         (dir / "km_engaged.csv").string(),
                                         (dir / "km_disengaged.csv").string()})}});
    });
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictFlags {
    std::string model;
    std::string data;
    std::string out = "predictions.csv";
    std::vector<double> percentiles = {5, 10, 25, 50, 75, 90};
};

int cmd_predict(CLI::App& app) {
    auto flags = std::make_shared<PredictFlags>();
    app.add_option("--model", flags->model, "fitted model JSON")->required();
    app.add_option("--data", flags->data, "input CSV")->required();
    app.add_option("--out", flags->out, "predictions output path");
    app.add_option("--percentiles", flags->percentiles, "survivor percentiles")->delimiter(',');

    app.callback([=]() {
        LoadedModel loaded = load_model_json(flags->model);
        double window = std::visit(
            [](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, BaselineModel>) {
                    return m.constant_minutes;
                } else if constexpr (std::is_same_v<T, RegressionBaselinePair>) {
                    return m.classifier.constant_minutes;
                } else {
                    return m.censoring_window;
                }
            },
            loaded.model);

        RawEventLog log = load_csv(flags->data);
        SurvivalDataset ds = apply_censoring(log, window);
        auto rows = score_dataset(loaded.model, ds, flags->percentiles);
        write_predictions_csv(rows, flags->percentiles, flags->out);

        print_summary(json{{"command", "predict"},
                           {"ok", true},
                           {"rows", rows.size()},
                           {"window_minutes", window},
                           {"percentiles", flags->percentiles},
                           {"artifacts", json::array({flags->out})}});
    });
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateFlags {
    std::string train;
    std::string validate;
    std::string test;
    std::vector<std::string> models = {"b", "lr", "cph-l", "cph-g", "mm"};
    std::vector<double> windows = {180, 360, 720};
    std::vector<double> percentiles = {5, 10, 25, 50, 75, 90};
    std::string specs_dir;
    std::string out = "report";
    bool final_run = false;
};

int cmd_evaluate(CLI::App& app) {
    auto flags = std::make_shared<EvaluateFlags>();
    app.add_option("--train", flags->train, "training CSV")->required();
    app.add_option("--validate", flags->validate, "validation CSV")->required();
    app.add_option("--test", flags->test, "test CSV (required with --final)");
    app.add_option("--models", flags->models, "model list")->delimiter(',');
    app.add_option("--windows", flags->windows, "censoring windows in minutes")->delimiter(',');
    app.add_option("--percentiles", flags->percentiles, "survivor percentiles")->delimiter(',');
    app.add_option("--specs", flags->specs_dir, "directory of spec_*.json from search");
    app.add_option("--out", flags->out, "output directory");
    app.add_flag("--final", flags->final_run,
                 "refit on train+validate and score the test split out-of-time");

    app.callback([=]() {
        fs::path dir(flags->out);
        fs::create_directories(dir);

        RawEventLog train = load_csv(flags->train);
        RawEventLog validate = load_csv(flags->validate);

        EvaluationReport report;
        report.metadata["mrad_a_censored_actual"] = "censoring_window";
        report.metadata["model_selection"] = "auc";

        EvaluateOptions options;
        options.percentiles = flags->percentiles;

        for (double window : flags->windows) {
            std::vector<ModelSpec> specs;
            for (const auto& name : flags->models) {
                specs.push_back(resolve_spec(name, window, flags->specs_dir));
            }
            options.windows = {window};
            EvaluationReport window_report = evaluate(specs, train, validate, options);
            report.any_failures = report.any_failures || window_report.any_failures;
            for (auto& e : window_report.entries) report.entries.push_back(std::move(e));
        }

        if (flags->final_run) {
            if (flags->test.empty()) throw DataError("--final needs --test");
            RawEventLog test = load_csv(flags->test);
            RawEventLog refit = concat_logs(train, validate);
            report.metadata["final"] = "train+validate refit scored on test";

            for (double window : flags->windows) {
                for (const auto& name : flags->models) {
                    // percentile with the lowest validation MRAD(O)
                    double best_percentile = flags->percentiles.front();
                    double best_mrad = std::numeric_limits<double>::infinity();
                    for (const auto& e : report.entries) {
                        if (e.model == name && e.window_minutes == window && !e.failed &&
                            e.mrad_o < best_mrad) {
                            best_mrad = e.mrad_o;
                            best_percentile = e.percentile;
                        }
                    }
                    ModelSpec spec = resolve_spec(name, window, flags->specs_dir);
                    EvaluateOptions final_options;
                    final_options.windows = {window};
                    final_options.percentiles = {best_percentile};
                    EvaluationReport out_of_time =
                        evaluate(std::span(&spec, 1), refit, test, final_options);
                    for (auto& e : out_of_time.entries) {
                        e.model = name + ":final";
                        report.entries.push_back(std::move(e));
                    }
                    report.any_failures = report.any_failures || out_of_time.any_failures;
                }
            }
        }

        json config_echo{{"train", flags->train},
                         {"validate", flags->validate},
                         {"test", flags->test},
                         {"models", flags->models},
                         {"windows", flags->windows},
                         {"percentiles", flags->percentiles},
                         {"specs", flags->specs_dir},
                         {"final", flags->final_run}};
        save_report_csv(report, (dir / "report.csv").string());
        save_report_json(report, (dir / "report.json").string(), config_echo.dump());
        write_manifest(dir, "evaluate", config_echo);

        print_summary(json{{"command", "evaluate"},
                           {"ok", !report.any_failures},
                           {"entries", report.entries.size()},
                           {"any_failures", report.any_failures},
                           {"artifacts", json::array({(dir / "report.csv").string(),
                                                      (dir / "report.json").string()})}});
        if (report.any_failures) {
            throw FitError("one or more model fits failed; see report");
        }
    });
    return 0;
}

// ---------------------------------------------------------------------------
// bootstrap
// ---------------------------------------------------------------------------

struct BootstrapFlags {
    std::string train;
    std::string validate;
    std::vector<std::string> models = {"lr", "cph-l", "cph-g", "mm"};
    double window = 720.0;
    double percentile = 5.0;
    int n = 10;
    std::uint64_t seed = 0;
    std::string specs_dir;
    std::string out = "bootstrap";
};

int cmd_bootstrap(CLI::App& app) {
    auto flags = std::make_shared<BootstrapFlags>();
    app.add_option("--train", flags->train, "training CSV")->required();
    app.add_option("--validate", flags->validate, "validation CSV")->required();
    app.add_option("--models", flags->models, "model list")->delimiter(',');
    app.add_option("--window", flags->window, "censoring window in minutes");
    app.add_option("--percentile", flags->percentile, "percentile for MRAD(O)");
    app.add_option("--n", flags->n, "bootstrap samples");
    app.add_option("--seed", flags->seed, "resampling seed");
    app.add_option("--specs", flags->specs_dir, "directory of spec_*.json from search");
    app.add_option("--out", flags->out, "output directory");

    app.callback([=]() {
        fs::path dir(flags->out);
        fs::create_directories(dir);

        RawEventLog train_log = load_csv(flags->train);
        RawEventLog validate_log = load_csv(flags->validate);
        SurvivalDataset train = apply_censoring(train_log, flags->window);
        SurvivalDataset validate = apply_censoring(validate_log, flags->window);

        EvaluationReport report;
        report.metadata["kind"] = "bootstrap";
        std::uint64_t model_seed = flags->seed;
        for (const auto& name : flags->models) {
            ModelSpec spec = resolve_spec(name, flags->window, flags->specs_dir);
            report.bootstrap.push_back(bootstrap_stability(spec, train, validate,
                                                           flags->percentile, flags->n,
                                                           ++model_seed));
        }

        json config_echo{{"train", flags->train},     {"validate", flags->validate},
                         {"models", flags->models},   {"window_minutes", flags->window},
                         {"percentile", flags->percentile}, {"n", flags->n},
                         {"seed", flags->seed},       {"specs", flags->specs_dir}};
        save_report_json(report, (dir / "bootstrap.json").string(), config_echo.dump());
        write_manifest(dir, "bootstrap", config_echo);

        json rows = json::array();
        for (const auto& b : report.bootstrap) {
            rows.push_back(json{{"model", b.model},
                                {"auc_mean", b.auc.mean},
                                {"auc_stddev", b.auc.stddev},
                                {"mrad_o_mean", b.mrad_o.mean},
                                {"mrad_o_stddev", b.mrad_o.stddev}});
        }
        print_summary(json{{"command", "bootstrap"},
                           {"ok", true},
                           {"results", rows},
                           {"artifacts", json::array({(dir / "bootstrap.json").string()})}});
    });
    return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct SearchFlags {
    std::string train;
    std::string validate;
    std::string model = "cph-l";
    std::vector<double> windows = {180, 360, 720};
    std::string out = "specs";
};

int cmd_search(CLI::App& app) {
    auto flags = std::make_shared<SearchFlags>();
    app.add_option("--train", flags->train, "training CSV")->required();
    app.add_option("--validate", flags->validate, "validation CSV")->required();
    app.add_option("--model", flags->model, "lr | cph-l | cph-g");
    app.add_option("--windows", flags->windows, "censoring windows in minutes")->delimiter(',');
    app.add_option("--out", flags->out, "spec output directory");

    app.callback([=]() {
        ModelKind kind = kind_of(flags->model);
        if (kind != ModelKind::Regression && kind != ModelKind::CoxLinear &&
            kind != ModelKind::CoxBoost) {
            throw DataError("search supports lr, cph-l and cph-g");
        }
        fs::path dir(flags->out);
        fs::create_directories(dir);

        std::vector<ModelSpec> grid;
        if (kind == ModelKind::CoxBoost) {
            for (int n_trees : {100, 200}) {
                for (double rate : {0.05, 0.1}) {
                    for (int min_obs : {25, 50}) {
                        ModelSpec spec = default_spec(flags->model);
                        spec.boost.n_trees = n_trees;
                        spec.boost.learning_rate = rate;
                        spec.boost.min_obs_per_leaf = min_obs;
                        grid.push_back(spec);
                    }
                }
            }
        } else {
            for (double lambda : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
                for (double alpha : {0.0, 0.5, 1.0}) {
                    if (lambda == 0.0 && alpha != 1.0) continue;  // same model
                    ModelSpec spec = default_spec(flags->model);
                    spec.penalty = {lambda, alpha};
                    grid.push_back(spec);
                }
            }
        }

        RawEventLog train = load_csv(flags->train);
        RawEventLog validate = load_csv(flags->validate);

        json selections = json::array();
        std::vector<std::string> artifacts;
        for (double window : flags->windows) {
            EvaluateOptions options;
            options.windows = {window};
            options.percentiles = {5.0};
            EvaluationReport report = evaluate(grid, train, validate, options);

            // entries come in grid order; pick the best AUC, first wins ties
            int best = -1;
            double best_auc = -1.0;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const auto& e = report.entries[g];
                if (e.failed) continue;
                if (e.auc > best_auc) {
                    best_auc = e.auc;
                    best = static_cast<int>(g);
                }
            }
            if (best < 0) throw FitError("every configuration failed during search");

            // grid entries share the model name, so label them uniquely
            fs::path spec_path =
                dir / ("spec_" + flags->model + "_w" + std::to_string(static_cast<int>(window)) +
                       ".json");
            save_spec_json(grid[static_cast<std::size_t>(best)], spec_path.string(),
                           "selected by validation AUC at window " +
                               std::to_string(static_cast<int>(window)));
            artifacts.push_back(spec_path.string());

            json selection = spec_summary(grid[static_cast<std::size_t>(best)]);
            selection["window_minutes"] = window;
            selection["validation_auc"] = best_auc;
            selections.push_back(std::move(selection));
        }

        json config_echo{{"train", flags->train},
                         {"validate", flags->validate},
                         {"model", flags->model},
                         {"windows", flags->windows},
                         {"grid_size", grid.size()}};
        write_manifest(dir, "search", config_echo, json{{"selections", selections}});

        print_summary(json{{"command", "search"},
                           {"ok", true},
                           {"model", flags->model},
                           {"selections", selections},
                           {"artifacts", artifacts}});
    });
    return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"survival models for email open prediction"};
    app.require_subcommand(1);

    cmd_generate(*app.add_subcommand("generate", "write a synthetic campaign corpus"));
    cmd_fit(*app.add_subcommand("fit", "fit one model and save it"));
    cmd_diagnose(*app.add_subcommand("diagnose",
                                     "proportionality and engagement-separation checks"));
    cmd_predict(*app.add_subcommand("predict", "score a dataset with a fitted model"));
    cmd_evaluate(*app.add_subcommand("evaluate", "fit and score models across windows"));
    cmd_bootstrap(*app.add_subcommand("bootstrap", "stability of metrics over resampled fits"));
    cmd_search(*app.add_subcommand("search", "hyper-parameter grid search by validation AUC"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cout << json{{"ok", false}, {"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace surv
