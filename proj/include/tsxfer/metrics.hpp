#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsxfer/core.hpp"

namespace tsxfer {

enum class Mode { ZeroShot, FineTuned, Scratch, Benchmark };

std::string_view mode_name(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

/// Quantile forecasts for one series and origin.
struct QuantilePath {
    /// Ascending levels in (0, 1).
    std::vector<double> levels;
    /// values[l][t]: level l at step t (0-based).
    std::vector<std::vector<double>> values;

    std::size_t horizon() const noexcept { return values.empty() ? 0 : values.front().size(); }
    /// Row for `level` (matched within 1e-9) or nullptr.
    const std::vector<double>* level(double level) const noexcept;
};

/// Builds a path from unordered levels. Rows are sorted by level; steps where
/// the values decrease with level are sorted and reported through the
/// return value (number of repaired steps).
std::size_t normalize_quantile_path(QuantilePath& path);

struct ForecastSet {
    std::string model_name;
    Mode mode = Mode::ZeroShot;
    std::string target;
    /// (series id, origin r >= 1) -> path
    std::map<std::pair<std::string, std::size_t>, QuantilePath> entries;
    std::vector<std::string> warnings;

    const QuantilePath* find(const std::string& series_id, std::size_t origin) const;
};

/// sqrt of the mean squared first difference over y[0..T_r). Requires 2 <= T_r <= length.
double naive_rmse_past(std::span<const double> y, std::size_t t_r);

/// Rolling-origin plans, one per series of the actuals dataset (same order).
using EvaluationPlan = std::vector<OriginPlan>;

/// Per-series plans derived from the train/test split of every series.
EvaluationPlan evaluation_plan(const Dataset& actuals, const SplitSpec& split, std::size_t horizon);
/// The same plan for every series.
EvaluationPlan uniform_plan(const Dataset& actuals, const OriginPlan& plan);

struct MetricValue {
    double value = 0.0;
    /// Series dropped at one or more origins because the naive RMSE vanished.
    std::size_t excluded_series = 0;
};

/// Mean over origins of the mean over series of RMSE(median path) / naive RMSE.
MetricValue avg_rmsse(const Dataset& actuals, const ForecastSet& forecasts, const EvaluationPlan& plan);

/// Mean over origins of the mean over series of mean(y - median path).
double avg_me(const Dataset& actuals, const ForecastSet& forecasts, const EvaluationPlan& plan);

/// Mean scaled interval score of the central (1 - alpha) interval.
MetricValue msis(const Dataset& actuals, const ForecastSet& forecasts, const EvaluationPlan& plan,
                 double alpha = 0.05);

struct ScaledValues {
    std::vector<double> values;
    /// Set when all inputs were equal and the values were returned unchanged.
    bool zero_spread = false;
};

/// Divides each value by the sample sd of the list (at least 2 values).
ScaledValues scale_me(std::span<const double> mes);

struct MetricRow {
    std::string model;
    Mode mode = Mode::ZeroShot;
    std::string target;
    double avg_rmsse = 0.0;
    double me = 0.0;
    double scaled_me = 0.0;
    double msis = 0.0;
    std::size_t excluded_series = 0;
};

/// Evaluates every forecast set; scaled_me is computed per target over all
/// rows of that target. Rows are ordered by (target, model, mode).
std::vector<MetricRow> metric_report(const std::vector<std::pair<const Dataset*, const ForecastSet*>>& runs,
                                     const SplitSpec& split, std::size_t horizon,
                                     std::vector<std::string>& warnings);

/// Test forecaster: last value plus bootstrapped, mean-removed first
/// differences accumulated over the horizon. Levels 0.025, 0.5, 0.975.
QuantilePath naive_bootstrap_forecast(std::span<const double> train, std::size_t horizon,
                                      std::size_t n_samples, std::uint64_t seed);

}  // namespace tsxfer
