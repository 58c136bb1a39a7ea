#pragma once

#include <array>
#include <string>
#include <vector>

#include "tsxfer/features.hpp"

namespace tsxfer {

struct DiversityTable {
    FeatureSet set = FeatureSet::Basic10;
    std::vector<std::string> datasets;
    std::vector<double> scores;
    std::vector<std::string> warnings;
};

/// Per source and feature the sample variance over that source's rows is
/// min-max scaled across sources; the score is the sum over features.
/// Expects raw features from at least two sources with two or more rows
/// each. Features with equal variance everywhere contribute 0 (warning).
DiversityTable diversity_scores(const std::vector<FeatureMatrix>& sources);

struct PcaProjection {
    std::string dataset;
    std::string series_id;
    double pc1 = 0.0;
    double pc2 = 0.0;
};

struct PcaResult {
    FeatureSet set = FeatureSet::Basic10;
    std::vector<std::string> feature_names;
    /// loadings[c]: unit-norm component c; its largest-|.| entry is positive.
    std::array<std::vector<double>, 2> loadings;
    std::array<double, 2> explained_variance_ratio{0.0, 0.0};
    std::vector<PcaProjection> projections;
    std::vector<std::string> warnings;
};

/// Two-component PCA of the pooled, jointly standardized rows via the
/// covariance eigendecomposition.
PcaResult pca2(const std::vector<FeatureMatrix>& matrices);

}  // namespace tsxfer
