#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surv/types.hpp"

namespace surv {

/// Piecewise-constant hazard: rate[i] applies on [knots[i-1], knots[i]),
/// the last rate extends to infinity. Times in minutes.
struct PiecewiseExponential {
    std::vector<double> knots;  // increasing segment boundaries
    std::vector<double> rates;  // per-minute, size knots.size() + 1

    double cumulative_hazard(double t) const;
    /// Inverse of H: the time at which the cumulative hazard reaches h.
    double time_at_cumulative_hazard(double h) const;
    /// Draws an event time scaled so the hazard is rate * psi.
    double sample(double psi, double u01) const;

    void validate() const;
};

struct GeneratorConfig {
    std::size_t n_recipients = 20000;
    std::size_t n_emails_per_recipient = 15;
    /// Incidence: pi = pi_cap * sigmoid(b . (1, engagement trait)). The cap
    /// bounds per-email proneness the way habitual ignoring does; the steep
    /// slope inside the bound is what makes historical open rates predictive.
    std::vector<double> true_b = {-1.1, 4.0};
    double pi_cap = 0.24;
    /// Latency coefficients over (latency trait, centered open rate,
    /// last_opened): log psi = beta . x. The negative open-rate tilt makes
    /// habitual openers slower *conditional on opening*, so narrow windows
    /// observe a noisier slice of the prone population.
    std::vector<double> true_beta = {0.5, -2.0, 0.0};
    PiecewiseExponential baseline = {
        {60.0, 180.0, 360.0, 720.0},
        {0.0047, 0.0020, 0.00125, 0.0014, 0.000100}};
    double monitor_horizon_minutes = 14400.0;  // 10 days
    double span_weeks = 13.0;
    std::size_t burn_in_emails = 8;
    double burn_in_weeks = 4.0;
    double click_given_open_logit = -1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Per-row hidden truth, aligned with the generated log.
struct TruthRecord {
    std::size_t row;
    std::string individual_id;
    int prone;    // the latent L
    double pi;
    double psi;   // 0 when not prone
};

struct GeneratedCampaign {
    RawEventLog log;
    std::vector<TruthRecord> truth;
};

/// Seeded synthetic campaign: per-recipient engagement traits drive a
/// logistic proneness probability per email; prone emails get an open time
/// from the piecewise-exponential baseline scaled by exp(beta . x),
/// truncated at the monitor horizon. Behavioral features (counts, open
/// rate, last-open flags, tenure) accumulate from a burn-in period of
/// simulated sends. Per-recipient RNG substreams make generation
/// stream-stable: growing n_recipients leaves earlier recipients' rows
/// unchanged.
GeneratedCampaign generate(const GeneratorConfig& config);

void save_truth_csv(const std::vector<TruthRecord>& truth, const std::string& path);

struct SplitScheme {
    double train_weeks = 4.0;
    double validate_weeks = 3.0;
    double gap_weeks = 3.0;
    double test_weeks = 3.0;
};

struct ChronologicalSplit {
    RawEventLog train;
    RawEventLog validate;
    RawEventLog test;
};

/// Slices the log by receive time into train / validate / (gap) / test
/// spans measured from the earliest receive time. Throws DataError on
/// degenerate spans or spans exceeding the log's horizon.
ChronologicalSplit split_chronological(const RawEventLog& log, const SplitScheme& scheme = {});

/// Direct-covariate sampler for parameter-recovery oracles: features are
/// i.i.d. standard normal, an optional cure state is drawn from
/// sigmoid(b . (1, x...)), and event times follow the baseline scaled by
/// exp(beta . x). Returns the dataset censored at `window_minutes` plus the
/// per-row truth.
struct PhSampleTruth {
    std::vector<int> prone;
    std::vector<double> pi;
    std::vector<double> psi;
};

struct PhSample {
    SurvivalDataset dataset;
    PhSampleTruth truth;
};

PhSample sample_ph_dataset(std::size_t n, const std::vector<double>& beta,
                           const PiecewiseExponential& baseline, double window_minutes,
                           std::uint64_t seed,
                           const std::optional<std::vector<double>>& cure_b = std::nullopt);

}  // namespace surv
