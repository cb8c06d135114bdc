#include "surv/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "surv/censoring.hpp"
#include "surv/errors.hpp"

namespace surv {

namespace {

constexpr double kSecondsPerWeek = 7.0 * 86400.0;
constexpr double kEpochBase = 1.6e9;       // fixed origin for generated timestamps
constexpr double kOpenRateCenter = 0.12;   // centers the open-rate latency feature

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void PiecewiseExponential::validate() const {
    if (rates.size() != knots.size() + 1) {
        throw DataError("piecewise-exponential needs one more rate than knots");
    }
    for (double r : rates) {
        if (!(r > 0.0)) throw DataError("piecewise-exponential rates must be positive");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i] <= knots[i - 1]) throw DataError("knots must be increasing");
    }
    if (!knots.empty() && knots.front() <= 0.0) throw DataError("knots must be positive");
}

double PiecewiseExponential::cumulative_hazard(double t) const {
    if (t <= 0.0) return 0.0;
    double h = 0.0;
    double start = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (t <= knots[i]) {
            return h + rates[i] * (t - start);
        }
        h += rates[i] * (knots[i] - start);
        start = knots[i];
    }
    return h + rates.back() * (t - start);
}

double PiecewiseExponential::time_at_cumulative_hazard(double h) const {
    if (h <= 0.0) return 0.0;
    double acc = 0.0;
    double start = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        double segment = rates[i] * (knots[i] - start);
        if (h <= acc + segment) {
            return start + (h - acc) / rates[i];
        }
        acc += segment;
        start = knots[i];
    }
    return start + (h - acc) / rates.back();
}

double PiecewiseExponential::sample(double psi, double u01) const {
    double u = std::min(u01, 1.0 - 1e-16);
    return time_at_cumulative_hazard(-std::log1p(-u) / psi);
}

void GeneratorConfig::validate() const {
    baseline.validate();
    if (n_recipients == 0 || n_emails_per_recipient == 0) {
        throw DataError("generator needs at least one recipient and one email");
    }
    if (true_b.size() != 2) throw DataError("true_b must be (intercept, trait coefficient)");
    if (!(pi_cap > 0.0) || pi_cap > 1.0) throw DataError("pi_cap must lie in (0, 1]");
    if (true_beta.size() != 3) {
        throw DataError("true_beta must cover (latency trait, open rate, last_opened)");
    }
    if (monitor_horizon_minutes <= 0.0 || span_weeks <= 0.0) {
        throw DataError("horizon and span must be positive");
    }
}

GeneratedCampaign generate(const GeneratorConfig& config) {
    config.validate();

    GeneratedCampaign out;
    out.log.feature_names = {"received_count", "opened_count", "clicked_count", "open_rate",
                             "last_opened",    "last_clicked", "tenure_days"};
    out.log.rows.reserve(config.n_recipients * config.n_emails_per_recipient);
    out.truth.reserve(out.log.rows.capacity());

    std::size_t prone_rows = 0;
    for (std::size_t r = 0; r < config.n_recipients; ++r) {
        std::mt19937_64 rng(splitmix64(config.seed ^ (0x517cc1b727220a95ULL * (r + 1))));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        double engagement_trait = normal(rng);
        double latency_trait = normal(rng);
        double signup_days_before = 30.0 + 335.0 * unit(rng);

        std::vector<double> send_offsets;  // seconds relative to window start
        send_offsets.reserve(config.burn_in_emails + config.n_emails_per_recipient);
        for (std::size_t e = 0; e < config.burn_in_emails; ++e) {
            send_offsets.push_back(-config.burn_in_weeks * kSecondsPerWeek * unit(rng));
        }
        for (std::size_t e = 0; e < config.n_emails_per_recipient; ++e) {
            send_offsets.push_back(config.span_weeks * kSecondsPerWeek * unit(rng));
        }
        std::sort(send_offsets.begin(), send_offsets.end());

        std::string id = "r" + std::to_string(r);
        double signup_epoch = kEpochBase - signup_days_before * 86400.0;

        double n_received = 0.0;
        double n_opened = 0.0;
        double n_clicked = 0.0;
        double last_opened = 0.0;
        double last_clicked = 0.0;

        for (std::size_t e = 0; e < send_offsets.size(); ++e) {
            double receive_ts = kEpochBase + send_offsets[e];
            bool emitted = send_offsets[e] >= 0.0;

            double open_rate = n_received > 0.0 ? n_opened / n_received : 0.0;
            double pi =
                config.pi_cap * sigmoid(config.true_b[0] + config.true_b[1] * engagement_trait);
            double log_psi = config.true_beta[0] * latency_trait +
                             config.true_beta[1] * (open_rate - kOpenRateCenter) +
                             config.true_beta[2] * last_opened;
            double psi = std::exp(log_psi);

            bool prone = unit(rng) < pi;
            bool opened = false;
            double open_minutes = 0.0;
            if (prone) {
                open_minutes = config.baseline.sample(psi, unit(rng));
                opened = open_minutes <= config.monitor_horizon_minutes;
            }
            bool clicked = false;
            if (opened) {
                clicked = unit(rng) <
                          sigmoid(config.click_given_open_logit + 0.8 * engagement_trait);
            }

            if (emitted) {
                RawEventRow row;
                row.individual_id = id;
                row.receive_ts = receive_ts;
                if (opened) row.open_ts = receive_ts + open_minutes * 60.0;
                row.features = {n_received,
                                n_opened,
                                n_clicked,
                                open_rate,
                                last_opened,
                                last_clicked,
                                (receive_ts - signup_epoch) / 86400.0};
                out.truth.push_back({out.log.rows.size(), id, prone ? 1 : 0, pi,
                                     prone ? psi : 0.0});
                out.log.rows.push_back(std::move(row));
                if (prone) ++prone_rows;
            }

            n_received += 1.0;
            if (opened) {
                n_opened += 1.0;
                last_opened = 1.0;
            } else {
                last_opened = 0.0;
            }
            if (clicked) {
                n_clicked += 1.0;
                last_clicked = 1.0;
            } else {
                last_clicked = 0.0;
            }
        }
    }

    if (prone_rows == 0) {
        std::cerr << "warning: generator produced no prone rows; the log has no opens\n";
    }
    return out;
}

void save_truth_csv(const std::vector<TruthRecord>& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "row,individual_id,L,pi,psi\n";
    char buf[160];
    for (const TruthRecord& t : truth) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%d,%.17g,%.17g\n", t.row, t.individual_id.c_str(),
                      t.prone, t.pi, t.psi);
        out << buf;
    }
}

ChronologicalSplit split_chronological(const RawEventLog& log, const SplitScheme& scheme) {
    if (log.empty()) throw DataError("cannot split an empty log");
    if (scheme.train_weeks <= 0.0 || scheme.validate_weeks <= 0.0 || scheme.test_weeks <= 0.0) {
        throw DataError("split spans must be positive");
    }
    if (scheme.gap_weeks < 0.0) throw DataError("split gap cannot be negative");

    double start = log.rows.front().receive_ts;
    double end = start;
    for (const RawEventRow& r : log.rows) {
        start = std::min(start, r.receive_ts);
        end = std::max(end, r.receive_ts);
    }

    double train_end = start + scheme.train_weeks * kSecondsPerWeek;
    double validate_end = train_end + scheme.validate_weeks * kSecondsPerWeek;
    double test_begin = validate_end + scheme.gap_weeks * kSecondsPerWeek;
    double test_end = test_begin + scheme.test_weeks * kSecondsPerWeek;
    if (test_begin >= end) {
        throw DataError("split scheme exceeds the log's time span");
    }

    ChronologicalSplit split;
    split.train.feature_names = log.feature_names;
    split.validate.feature_names = log.feature_names;
    split.test.feature_names = log.feature_names;
    for (const RawEventRow& r : log.rows) {
        if (r.receive_ts < train_end) {
            split.train.rows.push_back(r);
        } else if (r.receive_ts < validate_end) {
            split.validate.rows.push_back(r);
        } else if (r.receive_ts >= test_begin && r.receive_ts < test_end) {
            split.test.rows.push_back(r);
        }
    }
    return split;
}

PhSample sample_ph_dataset(std::size_t n, const std::vector<double>& beta,
                           const PiecewiseExponential& baseline, double window_minutes,
                           std::uint64_t seed,
                           const std::optional<std::vector<double>>& cure_b) {
    baseline.validate();
    if (window_minutes <= 0.0) throw DataError("window must be positive");
    if (cure_b && cure_b->size() != beta.size() + 1) {
        throw DataError("cure coefficients must be (intercept, one per feature)");
    }

    const std::size_t k = beta.size();
    std::vector<std::string> names;
    names.reserve(k);
    for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));

    PhSample out{SurvivalDataset(names, window_minutes), {}};
    out.dataset.reserve(n);

    std::mt19937_64 rng(splitmix64(seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> x(k);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            x[j] = normal(rng);
            eta += beta[j] * x[j];
        }
        double psi = std::exp(eta);

        double pi = 1.0;
        bool prone = true;
        if (cure_b) {
            double z = (*cure_b)[0];
            for (std::size_t j = 0; j < k; ++j) z += (*cure_b)[j + 1] * x[j];
            pi = sigmoid(z);
            prone = unit(rng) < pi;
        }

        double duration = window_minutes;
        bool event = false;
        if (prone) {
            double t = baseline.sample(psi, unit(rng));
            if (t < window_minutes) {
                event = true;
                duration = std::max(t, kDefaultDurationEpsilonMinutes);
            }
        }
        out.dataset.add_row("r" + std::to_string(i), x, duration, event);
        out.truth.prone.push_back(prone ? 1 : 0);
        out.truth.pi.push_back(pi);
        out.truth.psi.push_back(prone ? psi : 0.0);
    }
    return out;
}

}  // namespace surv
