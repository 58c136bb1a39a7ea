#include "tsxfer/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "parallel.hpp"
#include "tsxfer/stats.hpp"

namespace tsxfer {

namespace {

// Same value as a sort-based median, without the full sort.
double select_median(std::vector<double>& v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return (lower + upper) / 2.0;
}

}  // namespace

std::string_view distance_kind_name(DistanceKind kind) noexcept {
    switch (kind) {
        case DistanceKind::Tsfresh: return "tsfresh";
        case DistanceKind::Catch22: return "catch22";
        case DistanceKind::Dtw: return "dtw";
    }
    return "unknown";
}

DistanceKind parse_distance_kind(std::string_view text) {
    if (text == "tsfresh") return DistanceKind::Tsfresh;
    if (text == "catch22") return DistanceKind::Catch22;
    if (text == "dtw") return DistanceKind::Dtw;
    throw Error(Errc::InvalidArgument, fmt::format("unknown distance kind '{}'", text));
}

DistanceKind distance_kind(FeatureSet set) noexcept {
    return set == FeatureSet::Basic10 ? DistanceKind::Tsfresh : DistanceKind::Catch22;
}

double median_feature_distance(const FeatureMatrix& source, const FeatureMatrix& target) {
    if (source.set != target.set || source.feature_count() != target.feature_count())
        throw Error(Errc::FeatureSetMismatch,
                    fmt::format("'{}' ({}) vs '{}' ({})", source.dataset_name,
                                feature_set_name(source.set), target.dataset_name,
                                feature_set_name(target.set)));
    for (const auto* m : {&source, &target})
        if (!m->standardized())
            throw Error(Errc::NotStandardized, fmt::format("'{}' is not standardized", m->dataset_name));
    if (source.rows.empty() || target.rows.empty())
        throw Error(Errc::EmptyInput, "feature matrix without rows");

    const std::size_t p = source.feature_count();
    std::vector<double> per_feature(p);
    std::vector<double> pairs(source.row_count() * target.row_count());
    for (std::size_t f = 0; f < p; ++f) {
        std::size_t k = 0;
        for (const auto& a : source.rows)
            for (const auto& b : target.rows) pairs[k++] = std::fabs(a[f] - b[f]);
        per_feature[f] = select_median(pairs);
    }
    return median(std::move(per_feature));
}

DistanceMatrix distance_matrix(const std::vector<FeatureMatrix>& sources,
                               const std::vector<FeatureMatrix>& targets) {
    if (sources.empty() || targets.empty()) throw Error(Errc::EmptyInput, "no sources or no targets");
    const FeatureSet set = sources.front().set;
    DistanceMatrix out;
    out.kind = distance_kind(set);
    for (const auto& s : sources) out.source_names.push_back(s.dataset_name);
    for (const auto& t : targets) out.target_names.push_back(t.dataset_name);
    out.values.assign(sources.size(), std::vector<double>(targets.size(), 0.0));
    const std::size_t cells = sources.size() * targets.size();
    detail::parallel_for(
        cells,
        [&](std::size_t c) {
            const std::size_t n = c / targets.size(), m = c % targets.size();
            out.values[n][m] = median_feature_distance(sources[n], targets[m]);
        },
        2);
    return out;
}

DistanceMatrix dtw_distance_matrix(const std::vector<Barycenter>& sources,
                                   const std::vector<Barycenter>& targets) {
    DistanceMatrix out;
    out.kind = DistanceKind::Dtw;
    for (const auto& s : sources) out.source_names.push_back(s.dataset_name);
    for (const auto& t : targets) out.target_names.push_back(t.dataset_name);
    out.values.assign(sources.size(), std::vector<double>(targets.size(), 0.0));
    for (std::size_t n = 0; n < sources.size(); ++n)
        for (std::size_t m = 0; m < targets.size(); ++m)
            out.values[n][m] = dtw_distance(sources[n].values, targets[m].values);
    return out;
}

}  // namespace tsxfer
