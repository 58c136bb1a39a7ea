#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsxfer/core.hpp"
#include "tsxfer/features.hpp"

namespace tsxfer {

enum class DistanceKind { Tsfresh, Catch22, Dtw };

std::string_view distance_kind_name(DistanceKind kind) noexcept;
DistanceKind parse_distance_kind(std::string_view text);
/// basic10 matrices produce "tsfresh" distances, catch24 ones "catch22".
DistanceKind distance_kind(FeatureSet set) noexcept;

struct DistanceMatrix {
    DistanceKind kind = DistanceKind::Tsfresh;
    std::vector<std::string> source_names;
    std::vector<std::string> target_names;
    /// values[n][m]: distance from source n to target m.
    std::vector<std::vector<double>> values;
};

/// Median over features of the median over all (source row, target row)
/// pairs of the absolute feature difference. Both matrices must be
/// standardized and share a feature set.
double median_feature_distance(const FeatureMatrix& source, const FeatureMatrix& target);

DistanceMatrix distance_matrix(const std::vector<FeatureMatrix>& sources,
                               const std::vector<FeatureMatrix>& targets);

/// Unconstrained DTW with squared pointwise cost; returns the square root of
/// the optimal cumulative cost.
double dtw_distance(std::span<const double> a, std::span<const double> b);

/// How series are scaled before averaging.
enum class DbaScaling {
    Pooled,     ///< one mean/sd over all values of the dataset
    PerSeries,  ///< each series on its own
};

std::string_view dba_scaling_name(DbaScaling s) noexcept;
DbaScaling parse_dba_scaling(std::string_view text);

struct DbaOptions {
    std::size_t k = 1000;
    std::uint64_t seed = 0;
    std::size_t max_iter = 30;
    double tol = 1e-5;
    DbaScaling scaling = DbaScaling::Pooled;
    /// The initial medoid is chosen among at most this many sampled series.
    std::size_t medoid_candidates = 64;
};

struct Barycenter {
    std::string dataset_name;
    std::vector<double> values;
    std::size_t iterations_run = 0;
    bool converged = false;
    /// Sum of squared DTW costs from the members to the average, before the
    /// first update and after each one.
    std::vector<double> objective;
};

/// DTW barycenter averaging over (up to k sampled) z-scored series, starting
/// from the DTW medoid. Stops when the mean absolute coordinate change drops
/// below tol or after max_iter updates.
Barycenter dba_barycenter(const Dataset& dataset, const DbaOptions& options = {});

DistanceMatrix dtw_distance_matrix(const std::vector<Barycenter>& sources,
                                   const std::vector<Barycenter>& targets);

}  // namespace tsxfer
