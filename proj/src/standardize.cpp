#include <cmath>

#include <fmt/format.h>

#include "tsxfer/features.hpp"

namespace tsxfer {

std::vector<FeatureMatrix> standardize_group(std::vector<FeatureMatrix> group) {
    if (group.empty()) return group;
    const FeatureSet set = group.front().set;
    const std::size_t p = group.front().feature_count();
    std::size_t total = 0;
    for (const auto& m : group) {
        if (m.set != set || m.feature_count() != p)
            throw Error(Errc::FeatureSetMismatch,
                        fmt::format("'{}' uses {} but the group uses {}", m.dataset_name,
                                    feature_set_name(m.set), feature_set_name(set)));
        if (m.standardized())
            throw Error(Errc::InvalidArgument,
                        fmt::format("'{}' is already standardized", m.dataset_name));
        total += m.row_count();
    }
    if (total == 0) throw Error(Errc::EmptyInput, "standardization group has no rows");

    // Fixed summation order: matrices in group order, rows in matrix order.
    Standardization stats{std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    for (const auto& m : group)
        for (const auto& row : m.rows)
            for (std::size_t j = 0; j < p; ++j) stats.mean[j] += row[j];
    for (auto& mu : stats.mean) mu /= static_cast<double>(total);
    for (const auto& m : group)
        for (const auto& row : m.rows)
            for (std::size_t j = 0; j < p; ++j) {
                const double d = row[j] - stats.mean[j];
                stats.sd[j] += d * d;
            }
    for (auto& s : stats.sd) s = std::sqrt(s / static_cast<double>(total));

    std::vector<std::string> degenerate;
    for (std::size_t j = 0; j < p; ++j)
        if (!(stats.sd[j] > 0.0))
            degenerate.push_back(fmt::format("ZeroVarianceFeature: {} is constant across the group",
                                             group.front().feature_names[j]));

    for (auto& m : group) {
        for (auto& row : m.rows)
            for (std::size_t j = 0; j < p; ++j)
                row[j] = stats.sd[j] > 0.0 ? (row[j] - stats.mean[j]) / stats.sd[j] : 0.0;
        m.standardization = stats;
        m.warnings.insert(m.warnings.end(), degenerate.begin(), degenerate.end());
    }
    return group;
}

}  // namespace tsxfer
