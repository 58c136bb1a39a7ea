#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsxfer/core.hpp"
#include "tsxfer/features.hpp"
#include "tsxfer/metrics.hpp"
#include "tsxfer/relate.hpp"
#include "tsxfer/similarity.hpp"

namespace tsxfer {

struct DatasetEntry {
    std::string name;
    std::filesystem::path path;
    Role role = Role::Source;
};

struct ForecastEntry {
    /// Name of the source the model was trained on (or any label).
    std::string model;
    Mode mode = Mode::ZeroShot;
    std::string target;
    std::filesystem::path path;
};

struct RunConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<ForecastEntry> forecasts;
    std::size_t horizon = 15;
    double split_ratio = 0.8;
    /// Defaults to the horizon.
    std::optional<std::size_t> min_test;
    std::size_t sample_k = 1000;
    std::uint64_t seed = 0;
    std::vector<FeatureSet> feature_sets{FeatureSet::Basic10, FeatureSet::Catch24};
    /// Relative paths resolve against the config file directory.
    std::filesystem::path output_dir = "out";
    std::size_t dba_max_iter = 30;
    double dba_tol = 1e-5;
    DbaScaling dba_scaling = DbaScaling::Pooled;
    double alpha = 0.05;
    /// Empty means every mode present in the metric report.
    std::vector<Mode> modes;
    SourceFilter sources;

    SplitSpec split() const { return {split_ratio, min_test.value_or(horizon)}; }
};

/// Parses the TOML-style config:
///
///     horizon = 15
///     seed = 42
///     features = "both"            # basic10 | catch24 | both
///     output_dir = "out"
///     [[dataset]]
///     name = "retail"
///     path = "data/retail.csv"     # relative to the config file
///     role = "source"
///     [[forecast]]
///     model = "retail"
///     mode = "zero_shot"
///     target = "sales"
///     path = "forecasts/retail_sales.csv"
///
/// Other keys: split_ratio, min_test, sample_k, alpha, dba_max_iter,
/// dba_tol, dba_scaling ("pooled" | "per_series"), modes (comma list),
/// include_sources, exclude_sources (comma lists).
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Checks the invariants: one source and one target at least, unique names,
/// h >= 1, existing dataset paths. Throws ConfigInvalid.
void validate_config(const RunConfig& config);

std::vector<FeatureSet> parse_feature_sets(std::string_view text);

std::vector<std::string> split_list(std::string_view text);

}  // namespace tsxfer
