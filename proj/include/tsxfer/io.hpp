#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tsxfer/diversity.hpp"
#include "tsxfer/metrics.hpp"
#include "tsxfer/relate.hpp"
#include "tsxfer/similarity.hpp"

namespace tsxfer {

namespace fs = std::filesystem;

/// Writes `path` (must end in .csv) and a .json sidecar next to it with the
/// set, role, standardized flag, pooled statistics and warnings.
void write_feature_matrix(const FeatureMatrix& m, const fs::path& path);
FeatureMatrix read_feature_matrix(const fs::path& path);

void write_dataset(const Dataset& d, const fs::path& path);

/// Source rows, target columns; first line is `# kind=<kind>`.
void write_distance_matrix(const DistanceMatrix& m, const fs::path& path);
DistanceMatrix read_distance_matrix(const fs::path& path);

/// `index,value` CSV plus a .json sidecar (iterations, converged, objective).
void write_barycenter(const Barycenter& b, const fs::path& path);

/// `dataset,score`.
void write_diversity(const DiversityTable& t, const fs::path& path);
DiversityTable read_diversity(const fs::path& path, FeatureSet set);

/// <prefix>_loadings.csv, <prefix>_ratios.csv, <prefix>_projections.csv in `dir`.
void write_pca(const PcaResult& r, const fs::path& dir, const std::string& prefix);

void write_metric_report(const std::vector<MetricRow>& rows, const fs::path& path);
std::vector<MetricRow> read_metric_report(const fs::path& path);

void write_relations(const std::vector<RelationFit>& fits, const fs::path& path);

/// Long forecast CSV `series_id,origin,step,level,value`. Quantile crossings
/// are repaired and reported in ForecastSet::warnings.
ForecastSet read_forecasts(const fs::path& path, std::string model, Mode mode, std::string target);
void write_forecasts(const ForecastSet& f, const fs::path& path);

}  // namespace tsxfer
