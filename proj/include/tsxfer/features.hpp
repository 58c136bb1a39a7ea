#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsxfer/core.hpp"

namespace tsxfer {

enum class FeatureSet { Basic10, Catch24 };

std::string_view feature_set_name(FeatureSet set) noexcept;
FeatureSet parse_feature_set(std::string_view text);

/// Ordered feature names of a set; fixed across versions.
const std::vector<std::string>& feature_names(FeatureSet set);

struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
    /// Degenerate inputs that were resolved by substitution, e.g.
    /// "lumpyness: all-zero series" or "dfa: non-finite mapped to 0".
    std::vector<std::string> warnings;
};

/// Pooled statistics a matrix was standardized with.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> sd;
};

struct FeatureMatrix {
    std::string dataset_name;
    Role role = Role::Source;
    FeatureSet set = FeatureSet::Basic10;
    std::vector<std::string> feature_names;
    std::vector<std::string> series_ids;
    /// rows[i][p]: feature p of series i.
    std::vector<std::vector<double>> rows;
    std::optional<Standardization> standardization;
    std::vector<std::string> warnings;

    bool standardized() const noexcept { return standardization.has_value(); }
    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t feature_count() const noexcept { return feature_names.size(); }
};

/// Ten scalar descriptors: absolute_energy, intermittency, mean, median,
/// kurtosis, skewness, standard_deviation, agg_autocorrelation_max,
/// lumpyness, linear_trend.
///
/// Moments use the bias-corrected sample estimators (sd with n-1, skewness
/// G1, excess kurtosis G2). agg_autocorrelation_max is the maximum of the
/// biased sample autocorrelation over lags 1..5 (lags < n). Lumpyness uses
/// the population variance of the non-zero values.
/// Degenerate cases return 0 and add a warning: constant series (skewness,
/// kurtosis, autocorrelation), too few points for skewness (n < 3) or
/// kurtosis (n < 4), and all-zero series (intermittency, lumpyness).
FeatureVector basic_features(std::span<const double> values);

/// catch22 port plus mean and sample sd, in the order of
/// feature_names(FeatureSet::Catch24). Requires at least 3 values.
/// Non-finite results are mapped to 0 with a per-feature warning.
FeatureVector catch24_features(std::span<const double> values);

FeatureVector extract_features(std::span<const double> values, FeatureSet set);

/// Samples up to k series (see sample_series) and extracts one feature row
/// per sampled series. Rows are computed in parallel; order follows the
/// sampled dataset.
FeatureMatrix feature_matrix(const Dataset& dataset, FeatureSet set, std::size_t k,
                             std::uint64_t seed);

/// Z-transforms every feature over the pooled rows of the whole group using
/// the population standard deviation. Zero-variance features become 0 and
/// a warning is added to each matrix.
std::vector<FeatureMatrix> standardize_group(std::vector<FeatureMatrix> group);

}  // namespace tsxfer
