#include "tsxfer/relate.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace tsxfer {

namespace {

double metric_value(const MetricRow& row, MetricKind m) {
    switch (m) {
        case MetricKind::AvgRmsse: return row.avg_rmsse;
        case MetricKind::ScaledMe: return row.scaled_me;
        case MetricKind::Msis: return row.msis;
    }
    return 0.0;
}

Characteristic distance_characteristic(DistanceKind k) {
    switch (k) {
        case DistanceKind::Tsfresh: return Characteristic::DistTsfresh;
        case DistanceKind::Catch22: return Characteristic::DistCatch22;
        case DistanceKind::Dtw: return Characteristic::DistDtw;
    }
    return Characteristic::DistTsfresh;
}

/// x per source for one target; ordered by source name.
using Axis = std::map<std::string, double>;

}  // namespace

std::string_view characteristic_name(Characteristic c) noexcept {
    switch (c) {
        case Characteristic::DistTsfresh: return "dist_tsfresh";
        case Characteristic::DistCatch22: return "dist_catch22";
        case Characteristic::DistDtw: return "dist_dtw";
        case Characteristic::DivTsfresh: return "div_tsfresh";
        case Characteristic::DivCatch22: return "div_catch22";
    }
    return "unknown";
}

std::string_view metric_kind_name(MetricKind m) noexcept {
    switch (m) {
        case MetricKind::AvgRmsse: return "avg_rmsse";
        case MetricKind::ScaledMe: return "scaled_me";
        case MetricKind::Msis: return "msis";
    }
    return "unknown";
}

bool SourceFilter::admits(std::string_view source) const {
    if (std::find(exclude.begin(), exclude.end(), source) != exclude.end()) return false;
    return include.empty() || std::find(include.begin(), include.end(), source) != include.end();
}

std::vector<RelationFit> relation_table(const RelationInputs& inputs, Mode mode, const SourceFilter& filter,
                                        std::vector<std::string>& warnings) {
    // (target, model) -> metric row for this mode
    std::map<std::pair<std::string, std::string>, const MetricRow*> perf;
    std::vector<std::string> targets;
    for (const auto& row : inputs.metrics) {
        if (row.mode != mode) continue;
        perf[{row.target, row.model}] = &row;
        if (std::find(targets.begin(), targets.end(), row.target) == targets.end()) targets.push_back(row.target);
    }
    std::sort(targets.begin(), targets.end());

    // Characteristic axes in a fixed order.
    std::vector<std::pair<Characteristic, std::map<std::string, Axis>>> axes;  // per target
    for (const auto& dm : inputs.distances) {
        std::map<std::string, Axis> per_target;
        for (std::size_t m = 0; m < dm.target_names.size(); ++m)
            for (std::size_t n = 0; n < dm.source_names.size(); ++n)
                per_target[dm.target_names[m]][dm.source_names[n]] = dm.values[n][m];
        axes.emplace_back(distance_characteristic(dm.kind), std::move(per_target));
    }
    for (const auto& dt : inputs.diversity) {
        Axis axis;
        for (std::size_t i = 0; i < dt.datasets.size(); ++i) axis[dt.datasets[i]] = dt.scores[i];
        std::map<std::string, Axis> per_target;
        for (const auto& t : targets) per_target[t] = axis;
        axes.emplace_back(dt.set == FeatureSet::Basic10 ? Characteristic::DivTsfresh : Characteristic::DivCatch22,
                          std::move(per_target));
    }
    std::stable_sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<RelationFit> fits;
    for (const auto& target : targets)
        for (const auto& [characteristic, per_target] : axes) {
            auto it = per_target.find(target);
            if (it == per_target.end()) {
                warnings.push_back(fmt::format("NoOverlap: {} has no values for target '{}'",
                                               characteristic_name(characteristic), target));
                continue;
            }
            for (MetricKind metric : {MetricKind::AvgRmsse, MetricKind::ScaledMe, MetricKind::Msis}) {
                RelationFit fit;
                fit.target = target;
                fit.characteristic = characteristic;
                fit.metric = metric;
                fit.mode = mode;
                for (const auto& [source, x] : it->second) {
                    if (!filter.admits(source)) continue;
                    auto p = perf.find({target, source});
                    if (p == perf.end()) {
                        if (metric == MetricKind::AvgRmsse)
                            warnings.push_back(fmt::format("no {} metrics for source '{}' on target '{}'; skipped",
                                                           mode_name(mode), source, target));
                        continue;
                    }
                    fit.sources.push_back(source);
                    fit.x.push_back(x);
                    fit.y.push_back(metric_value(*p->second, metric));
                }
                const auto label = fmt::format("{}/{}/{}/{}", target, characteristic_name(characteristic),
                                               metric_kind_name(metric), mode_name(mode));
                if (fit.x.size() < 3) {
                    warnings.push_back(fmt::format("NoOverlap: {} has {} usable sources", label, fit.x.size()));
                    continue;
                }
                try {
                    const auto ols = ols_fit(fit.x, fit.y);
                    fit.slope = ols.slope;
                    fit.intercept = ols.intercept;
                    fit.p_value = ols.p_value;
                    fit.n = ols.n;
                    if (ols.exact_fit) fit.flags = "exact_fit";
                } catch (const Error& e) {
                    if (e.code() != Errc::DegenerateX) throw;
                    warnings.push_back(fmt::format("{}: {}", label, e.what()));
                    continue;
                }
                fits.push_back(std::move(fit));
            }
        }
    if (fits.empty())
        throw Error(Errc::NoOverlap, fmt::format("no relation could be fitted for mode {}", mode_name(mode)));
    return fits;
}

}  // namespace tsxfer
