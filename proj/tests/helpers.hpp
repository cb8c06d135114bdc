#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "surv/types.hpp"

namespace testutil {

/// Dataset from parallel rows; features default to a single zero column.
inline surv::SurvivalDataset make_dataset(const std::vector<double>& durations,
                                          const std::vector<bool>& events, double window,
                                          const std::vector<std::vector<double>>& features = {},
                                          std::vector<std::string> names = {}) {
    std::size_t k = features.empty() ? 1 : features.front().size();
    if (names.empty()) {
        for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
    }
    surv::SurvivalDataset ds(names, window);
    for (std::size_t i = 0; i < durations.size(); ++i) {
        std::vector<double> row = features.empty() ? std::vector<double>(k, 0.0) : features[i];
        ds.add_row("r" + std::to_string(i), row, durations[i], events[i]);
    }
    return ds;
}

/// Central finite differences of a scalar function.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double keep = x[j];
        x[j] = keep + h;
        double up = f(x);
        x[j] = keep - h;
        double down = f(x);
        x[j] = keep;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

/// Pair-counting AUC oracle: wins + half-ties over positive x negative pairs.
inline double brute_force_auc(const std::vector<double>& scores,
                              const std::vector<unsigned char>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("survmail_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::FILE* fa = std::fopen(a.string().c_str(), "rb");
    std::FILE* fb = std::fopen(b.string().c_str(), "rb");
    if (!fa || !fb) {
        if (fa) std::fclose(fa);
        if (fb) std::fclose(fb);
        return false;
    }
    bool same = true;
    int ca;
    int cb;
    do {
        ca = std::fgetc(fa);
        cb = std::fgetc(fb);
        if (ca != cb) {
            same = false;
            break;
        }
    } while (ca != EOF);
    std::fclose(fa);
    std::fclose(fb);
    return same;
}

}  // namespace testutil
