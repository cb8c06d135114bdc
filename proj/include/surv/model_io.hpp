#pragma once

#include <string>

#include "surv/evaluation.hpp"

namespace surv {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "survmail.model";

/// Serializes any fitted model into the versioned JSON container, with the
/// spec (hyper-parameters + seed) that produced it.
void save_model_json(const FittedModel& model, const ModelSpec& spec, const std::string& path);

struct LoadedModel {
    FittedModel model;
    ModelSpec spec;
};

/// Throws DataError on version or schema mismatch.
LoadedModel load_model_json(const std::string& path);

void save_report_json(const EvaluationReport& report, const std::string& path,
                      const std::string& config_echo_json = "{}");

/// Stand-alone hyper-parameter files produced by the search command.
void save_spec_json(const ModelSpec& spec, const std::string& path,
                    const std::string& note = "");
ModelSpec load_spec_json(const std::string& path);

}  // namespace surv
