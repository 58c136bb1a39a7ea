#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsxfer/diversity.hpp"
#include "tsxfer/metrics.hpp"
#include "tsxfer/similarity.hpp"
#include "tsxfer/stats.hpp"

namespace tsxfer {

enum class Characteristic { DistTsfresh, DistCatch22, DistDtw, DivTsfresh, DivCatch22 };
enum class MetricKind { AvgRmsse, ScaledMe, Msis };

std::string_view characteristic_name(Characteristic c) noexcept;
std::string_view metric_kind_name(MetricKind m) noexcept;

struct RelationFit {
    std::string target;
    Characteristic characteristic = Characteristic::DistTsfresh;
    MetricKind metric = MetricKind::AvgRmsse;
    Mode mode = Mode::ZeroShot;
    double slope = 0.0;
    double intercept = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    /// "exact_fit" or empty.
    std::string flags;
    /// Points entering the fit, in source order.
    std::vector<std::string> sources;
    std::vector<double> x;
    std::vector<double> y;
};

/// Which sources may enter the x-axis. An empty include list admits all.
struct SourceFilter {
    std::vector<std::string> include;
    std::vector<std::string> exclude;

    bool admits(std::string_view source) const;
};

struct RelationInputs {
    std::vector<MetricRow> metrics;
    std::vector<DistanceMatrix> distances;
    std::vector<DiversityTable> diversity;
};

/// One fit per (target, characteristic, metric) for the given mode. The model
/// name of a metric row identifies the source it was trained on. Sources
/// without a metric are skipped with a warning; combinations with fewer than
/// three usable sources or constant x are skipped with a warning. Throws
/// NoOverlap when no combination can be fitted.
std::vector<RelationFit> relation_table(const RelationInputs& inputs, Mode mode,
                                        const SourceFilter& filter,
                                        std::vector<std::string>& warnings);

}  // namespace tsxfer
