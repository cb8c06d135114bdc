#pragma once

#include <span>
#include <vector>

#include "surv/types.hpp"

namespace surv {

/// Per-feature (mean, scale) computed from a training split. Constant
/// columns get scale 1 so transforms stay finite.
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> scale;

    static FeatureScaler fit(const SurvivalDataset& ds);

    std::size_t size() const { return mean.size(); }

    void apply(std::span<const double> row, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> row) const;

    /// Whole dataset, row-major output.
    std::vector<double> apply_all(const SurvivalDataset& ds) const;
};

}  // namespace surv
