#include "surv/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "surv/errors.hpp"

namespace surv {

using nlohmann::json;

namespace {

json curve_to_json(const StepSurvivalCurve& curve) {
    return json{{"times", curve.times},
                {"survival", curve.survival},
                {"cum_hazard", curve.cum_hazard}};
}

StepSurvivalCurve curve_from_json(const json& j) {
    StepSurvivalCurve curve;
    curve.times = j.at("times").get<std::vector<double>>();
    curve.survival = j.at("survival").get<std::vector<double>>();
    curve.cum_hazard = j.at("cum_hazard").get<std::vector<double>>();
    return curve;
}

json scaler_to_json(const FeatureScaler& scaler) {
    return json{{"mean", scaler.mean}, {"scale", scaler.scale}};
}

FeatureScaler scaler_from_json(const json& j) {
    FeatureScaler scaler;
    scaler.mean = j.at("mean").get<std::vector<double>>();
    scaler.scale = j.at("scale").get<std::vector<double>>();
    return scaler;
}

json penalty_to_json(const ElasticNetPenalty& penalty) {
    return json{{"lambda", penalty.lambda}, {"alpha", penalty.alpha}};
}

ElasticNetPenalty penalty_from_json(const json& j) {
    return {j.at("lambda").get<double>(), j.at("alpha").get<double>()};
}

const char* variant_name(BaselineVariant v) {
    switch (v) {
        case BaselineVariant::OpenRate: return "open_rate";
        case BaselineVariant::ConstantTime: return "constant_time";
        case BaselineVariant::Logistic: return "logistic";
        case BaselineVariant::Linear: return "linear";
    }
    return "unknown";
}

BaselineVariant variant_from_name(const std::string& name) {
    if (name == "open_rate") return BaselineVariant::OpenRate;
    if (name == "constant_time") return BaselineVariant::ConstantTime;
    if (name == "logistic") return BaselineVariant::Logistic;
    if (name == "linear") return BaselineVariant::Linear;
    throw DataError("unknown baseline variant '" + name + "'");
}

json baseline_to_json(const BaselineModel& m) {
    return json{{"variant", variant_name(m.variant)},
                {"feature_names", m.feature_names},
                {"standardization", scaler_to_json(m.scaler)},
                {"coefficients", m.coefficients},
                {"penalty", penalty_to_json(m.penalty)},
                {"constant_minutes", m.constant_minutes},
                {"open_rate_feature", m.open_rate_feature},
                {"log_time", m.log_time},
                {"epsilon_minutes", m.epsilon_minutes},
                {"iterations", m.iterations}};
}

BaselineModel baseline_from_json(const json& j) {
    BaselineModel m;
    m.variant = variant_from_name(j.at("variant").get<std::string>());
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.scaler = scaler_from_json(j.at("standardization"));
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.penalty = penalty_from_json(j.at("penalty"));
    m.constant_minutes = j.at("constant_minutes").get<double>();
    m.open_rate_feature = j.at("open_rate_feature").get<std::string>();
    m.log_time = j.at("log_time").get<bool>();
    m.epsilon_minutes = j.at("epsilon_minutes").get<double>();
    m.iterations = j.at("iterations").get<int>();
    return m;
}

json tree_to_json(const RegressionTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        nodes.push_back(json{{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value}});
    }
    return nodes;
}

RegressionTree tree_from_json(const json& j) {
    RegressionTree tree;
    for (const auto& n : j) {
        tree.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                              n.at("left").get<int>(), n.at("right").get<int>(),
                              n.at("value").get<double>()});
    }
    return tree;
}

struct ModelJson {
    std::string type;
    json body;
};

ModelJson model_to_json(const FittedModel& model) {
    if (const auto* b = std::get_if<BaselineModel>(&model)) {
        return {"baseline", baseline_to_json(*b)};
    }
    if (const auto* pair = std::get_if<RegressionBaselinePair>(&model)) {
        return {"regression_pair", json{{"classifier", baseline_to_json(pair->classifier)},
                                        {"time", baseline_to_json(pair->time)}}};
    }
    if (const auto* cox = std::get_if<CoxLinearModel>(&model)) {
        return {"cox_linear", json{{"feature_names", cox->feature_names},
                                   {"standardization", scaler_to_json(cox->scaler)},
                                   {"beta", cox->beta},
                                   {"penalty", penalty_to_json(cox->penalty)},
                                   {"baseline", curve_to_json(cox->baseline)},
                                   {"censoring_window", cox->censoring_window},
                                   {"iterations", cox->iterations},
                                   {"final_gradient_norm", cox->final_gradient_norm}}};
    }
    if (const auto* boost = std::get_if<CoxBoostModel>(&model)) {
        json trees = json::array();
        for (const auto& t : boost->trees) trees.push_back(tree_to_json(t));
        return {"cox_boost",
                json{{"feature_names", boost->feature_names},
                     {"config",
                      json{{"n_trees", boost->config.n_trees},
                           {"learning_rate", boost->config.learning_rate},
                           {"min_obs_per_leaf", boost->config.min_obs_per_leaf},
                           {"max_depth", boost->config.max_depth},
                           {"n_split_quantiles", boost->config.n_split_quantiles}}},
                     {"seed", boost->seed},
                     {"trees", trees},
                     {"baseline", curve_to_json(boost->baseline)},
                     {"censoring_window", boost->censoring_window},
                     {"train_pll_trace", boost->train_pll_trace},
                     {"skipped_stages", boost->skipped_stages}}};
    }
    if (const auto* mm = std::get_if<MixtureCureModel>(&model)) {
        return {"mixture_cure", json{{"feature_names", mm->feature_names},
                                     {"incidence_feature_names", mm->incidence_feature_names},
                                     {"latency_standardization", scaler_to_json(mm->latency_scaler)},
                                     {"incidence_standardization",
                                      scaler_to_json(mm->incidence_scaler)},
                                     {"b", mm->b},
                                     {"beta", mm->beta},
                                     {"baseline", curve_to_json(mm->baseline)},
                                     {"censoring_window", mm->censoring_window},
                                     {"em_trace", mm->em_trace},
                                     {"iterations", mm->iterations},
                                     {"ridge_fallback", mm->ridge_fallback}}};
    }
    throw DataError("cannot serialize unknown model variant");
}

FittedModel model_from_json(const std::string& type, const json& body) {
    if (type == "baseline") return baseline_from_json(body);
    if (type == "regression_pair") {
        return RegressionBaselinePair{baseline_from_json(body.at("classifier")),
                                      baseline_from_json(body.at("time"))};
    }
    if (type == "cox_linear") {
        CoxLinearModel m;
        m.feature_names = body.at("feature_names").get<std::vector<std::string>>();
        m.scaler = scaler_from_json(body.at("standardization"));
        m.beta = body.at("beta").get<std::vector<double>>();
        m.penalty = penalty_from_json(body.at("penalty"));
        m.baseline = curve_from_json(body.at("baseline"));
        m.censoring_window = body.at("censoring_window").get<double>();
        m.iterations = body.at("iterations").get<int>();
        m.final_gradient_norm = body.at("final_gradient_norm").get<double>();
        return m;
    }
    if (type == "cox_boost") {
        CoxBoostModel m;
        m.feature_names = body.at("feature_names").get<std::vector<std::string>>();
        const json& c = body.at("config");
        m.config = {c.at("n_trees").get<int>(), c.at("learning_rate").get<double>(),
                    c.at("min_obs_per_leaf").get<int>(), c.at("max_depth").get<int>(),
                    c.at("n_split_quantiles").get<int>()};
        m.seed = body.at("seed").get<std::uint64_t>();
        for (const auto& t : body.at("trees")) m.trees.push_back(tree_from_json(t));
        m.baseline = curve_from_json(body.at("baseline"));
        m.censoring_window = body.at("censoring_window").get<double>();
        m.train_pll_trace = body.at("train_pll_trace").get<std::vector<double>>();
        m.skipped_stages = body.at("skipped_stages").get<int>();
        return m;
    }
    if (type == "mixture_cure") {
        MixtureCureModel m;
        m.feature_names = body.at("feature_names").get<std::vector<std::string>>();
        m.incidence_feature_names =
            body.at("incidence_feature_names").get<std::vector<std::string>>();
        m.latency_scaler = scaler_from_json(body.at("latency_standardization"));
        m.incidence_scaler = scaler_from_json(body.at("incidence_standardization"));
        m.b = body.at("b").get<std::vector<double>>();
        m.beta = body.at("beta").get<std::vector<double>>();
        m.baseline = curve_from_json(body.at("baseline"));
        m.censoring_window = body.at("censoring_window").get<double>();
        m.em_trace = body.at("em_trace").get<std::vector<double>>();
        m.iterations = body.at("iterations").get<int>();
        m.ridge_fallback = body.at("ridge_fallback").get<bool>();
        return m;
    }
    throw DataError("unknown model type '" + type + "'");
}

const char* kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::OpenRate: return "open_rate";
        case ModelKind::Regression: return "regression";
        case ModelKind::CoxLinear: return "cox_linear";
        case ModelKind::CoxBoost: return "cox_boost";
        case ModelKind::MixtureCure: return "mixture_cure";
    }
    return "unknown";
}

ModelKind kind_from_name(const std::string& name) {
    if (name == "open_rate") return ModelKind::OpenRate;
    if (name == "regression") return ModelKind::Regression;
    if (name == "cox_linear") return ModelKind::CoxLinear;
    if (name == "cox_boost") return ModelKind::CoxBoost;
    if (name == "mixture_cure") return ModelKind::MixtureCure;
    throw DataError("unknown model kind '" + name + "'");
}

json spec_to_json(const ModelSpec& spec) {
    json mixture{{"incidence_penalty", penalty_to_json(spec.mixture.incidence_penalty)},
                 {"latency_penalty", penalty_to_json(spec.mixture.latency_penalty)},
                 {"tol", spec.mixture.tol},
                 {"max_iterations", spec.mixture.max_iterations}};
    if (spec.mixture.incidence_features) {
        mixture["incidence_features"] = *spec.mixture.incidence_features;
    }
    return json{{"name", spec.name},
                {"kind", kind_name(spec.kind)},
                {"penalty", penalty_to_json(spec.penalty)},
                {"boost",
                 json{{"n_trees", spec.boost.n_trees},
                      {"learning_rate", spec.boost.learning_rate},
                      {"min_obs_per_leaf", spec.boost.min_obs_per_leaf},
                      {"max_depth", spec.boost.max_depth},
                      {"n_split_quantiles", spec.boost.n_split_quantiles}}},
                {"mixture", mixture},
                {"seed", spec.seed},
                {"open_rate_feature", spec.open_rate_feature}};
}

ModelSpec spec_from_json(const json& j) {
    ModelSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.penalty = penalty_from_json(j.at("penalty"));
    const json& b = j.at("boost");
    spec.boost = {b.at("n_trees").get<int>(), b.at("learning_rate").get<double>(),
                  b.at("min_obs_per_leaf").get<int>(), b.at("max_depth").get<int>(),
                  b.at("n_split_quantiles").get<int>()};
    const json& m = j.at("mixture");
    if (m.contains("incidence_features")) {
        spec.mixture.incidence_features = m.at("incidence_features").get<std::vector<std::string>>();
    }
    spec.mixture.incidence_penalty = penalty_from_json(m.at("incidence_penalty"));
    spec.mixture.latency_penalty = penalty_from_json(m.at("latency_penalty"));
    spec.mixture.tol = m.at("tol").get<double>();
    spec.mixture.max_iterations = m.at("max_iterations").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.open_rate_feature = j.at("open_rate_feature").get<std::string>();
    return spec;
}

}  // namespace

void save_model_json(const FittedModel& model, const ModelSpec& spec, const std::string& path) {
    ModelJson encoded = model_to_json(model);
    json doc{{"format", kModelFormatName},
             {"version", kModelFormatVersion},
             {"type", encoded.type},
             {"model", std::move(encoded.body)},
             {"spec", spec_to_json(spec)}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

LoadedModel load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw DataError("'" + path + "' is not valid JSON: " + ex.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kModelFormatName) {
            throw DataError("'" + path + "' is not a model container");
        }
        if (doc.at("version").get<int>() != kModelFormatVersion) {
            throw DataError("'" + path + "' has unsupported container version");
        }
        LoadedModel loaded{model_from_json(doc.at("type").get<std::string>(), doc.at("model")),
                           spec_from_json(doc.at("spec"))};
        return loaded;
    } catch (const json::exception& ex) {
        throw DataError("'" + path + "' is missing fields: " + ex.what());
    }
}

void save_spec_json(const ModelSpec& spec, const std::string& path, const std::string& note) {
    json doc{{"format", "survmail.spec"},
             {"version", kModelFormatVersion},
             {"spec", spec_to_json(spec)}};
    if (!note.empty()) doc["note"] = note;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

ModelSpec load_spec_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
        if (doc.at("format").get<std::string>() != "survmail.spec") {
            throw DataError("'" + path + "' is not a spec file");
        }
        return spec_from_json(doc.at("spec"));
    } catch (const json::exception& ex) {
        throw DataError("'" + path + "' is malformed: " + ex.what());
    }
}

void save_report_json(const EvaluationReport& report, const std::string& path,
                      const std::string& config_echo_json) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        json row{{"model", e.model},
                 {"window_minutes", e.window_minutes},
                 {"percentile", e.percentile}};
        if (e.failed) {
            row["status"] = "failed";
            row["error"] = e.error;
        } else {
            row["status"] = "ok";
            row["auc"] = e.auc;
            row["mrad_a"] = e.mrad_a;
            row["mrad_o"] = e.mrad_o;
            row["n_observed"] = e.n_observed;
            row["n_censored"] = e.n_censored;
        }
        entries.push_back(std::move(row));
    }
    json bootstrap = json::array();
    for (const auto& b : report.bootstrap) {
        bootstrap.push_back(json{{"model", b.model},
                                 {"window_minutes", b.window_minutes},
                                 {"percentile", b.percentile},
                                 {"n_samples", b.n_samples},
                                 {"auc_mean", b.auc.mean},
                                 {"auc_stddev", b.auc.stddev},
                                 {"mrad_o_mean", b.mrad_o.mean},
                                 {"mrad_o_stddev", b.mrad_o.stddev}});
    }
    json doc{{"format", "survmail.report"},
             {"version", kModelFormatVersion},
             {"metadata", report.metadata},
             {"entries", std::move(entries)},
             {"bootstrap", std::move(bootstrap)},
             {"any_failures", report.any_failures}};
    try {
        doc["config"] = json::parse(config_echo_json);
    } catch (const json::exception&) {
        doc["config"] = config_echo_json;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

}  // namespace surv
