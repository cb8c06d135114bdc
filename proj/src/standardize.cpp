#include "surv/standardize.hpp"

#include <cmath>

#include "surv/errors.hpp"

namespace surv {

FeatureScaler FeatureScaler::fit(const SurvivalDataset& ds) {
    if (ds.empty()) throw DataError("cannot fit a scaler on an empty dataset");
    const std::size_t k = ds.n_features();
    const double n = static_cast<double>(ds.size());

    FeatureScaler scaler;
    scaler.mean.assign(k, 0.0);
    scaler.scale.assign(k, 1.0);

    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        for (std::size_t j = 0; j < k; ++j) scaler.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < k; ++j) scaler.mean[j] /= n;

    std::vector<double> ss(k, 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto row = ds.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            double d = row[j] - scaler.mean[j];
            ss[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        double sd = std::sqrt(ss[j] / n);
        scaler.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return scaler;
}

void FeatureScaler::apply(std::span<const double> row, std::span<double> out) const {
    for (std::size_t j = 0; j < mean.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
}

std::vector<double> FeatureScaler::apply(std::span<const double> row) const {
    std::vector<double> out(mean.size());
    apply(row, out);
    return out;
}

std::vector<double> FeatureScaler::apply_all(const SurvivalDataset& ds) const {
    const std::size_t k = mean.size();
    std::vector<double> out(ds.size() * k);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        apply(ds.row(i), {out.data() + i * k, k});
    }
    return out;
}

}  // namespace surv
