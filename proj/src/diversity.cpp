#include "tsxfer/diversity.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "tsxfer/stats.hpp"

namespace tsxfer {

DiversityTable diversity_scores(const std::vector<FeatureMatrix>& sources) {
    if (sources.size() < 2)
        throw Error(Errc::SingleSource,
                    fmt::format("diversity needs at least 2 sources, got {}", sources.size()));
    const FeatureSet set = sources.front().set;
    const std::size_t p = sources.front().feature_count();
    for (const auto& m : sources) {
        if (m.set != set || m.feature_count() != p)
            throw Error(Errc::FeatureSetMismatch, fmt::format("'{}' uses a different feature set", m.dataset_name));
        if (m.standardized())
            throw Error(Errc::InvalidArgument,
                        fmt::format("'{}': diversity expects raw features", m.dataset_name));
        if (m.row_count() < 2)
            throw Error(Errc::InsufficientPoints,
                        fmt::format("'{}' has {} rows, need 2 for a variance", m.dataset_name, m.row_count()));
    }

    // var[s][f]
    std::vector<std::vector<double>> var(sources.size(), std::vector<double>(p));
    std::vector<double> column;
    for (std::size_t s = 0; s < sources.size(); ++s)
        for (std::size_t f = 0; f < p; ++f) {
            column.clear();
            for (const auto& row : sources[s].rows) column.push_back(row[f]);
            var[s][f] = sample_variance(column);
        }

    DiversityTable out;
    out.set = set;
    out.scores.assign(sources.size(), 0.0);
    for (const auto& m : sources) out.datasets.push_back(m.dataset_name);
    for (std::size_t f = 0; f < p; ++f) {
        double lo = var[0][f], hi = var[0][f];
        for (const auto& v : var) {
            lo = std::min(lo, v[f]);
            hi = std::max(hi, v[f]);
        }
        if (!(hi > lo)) {
            out.warnings.push_back(fmt::format("DegenerateFeature: {} has equal variance in every source",
                                               sources.front().feature_names[f]));
            continue;
        }
        for (std::size_t s = 0; s < sources.size(); ++s)
            out.scores[s] += var[s][f] == hi ? 1.0 : (var[s][f] - lo) / (hi - lo);
    }
    return out;
}

}  // namespace tsxfer
