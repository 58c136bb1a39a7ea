#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "parallel.hpp"
#include "tsxfer/rng.hpp"
#include "tsxfer/similarity.hpp"
#include "tsxfer/stats.hpp"

namespace tsxfer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Cumulative cost table, row-major (a.size() x b.size()).
std::vector<double> dtw_table(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<double> d(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double c = (a[i] - b[j]) * (a[i] - b[j]);
            double best;
            if (i == 0 && j == 0) best = 0.0;
            else {
                best = kInf;
                if (i > 0 && j > 0) best = std::min(best, d[(i - 1) * m + j - 1]);
                if (i > 0) best = std::min(best, d[(i - 1) * m + j]);
                if (j > 0) best = std::min(best, d[i * m + j - 1]);
            }
            d[i * m + j] = best + c;
        }
    return d;
}

struct Alignment {
    double cost = 0.0;
    /// (index into the average, index into the member) along the optimal path.
    std::vector<std::pair<std::size_t, std::size_t>> path;
};

/// Optimal path; ties prefer the diagonal, then a step in the average.
Alignment align(std::span<const double> avg, std::span<const double> member) {
    const std::size_t n = avg.size(), m = member.size();
    const auto d = dtw_table(avg, member);
    Alignment out;
    out.cost = d.back();
    std::size_t i = n - 1, j = m - 1;
    out.path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) --j;
        else if (j == 0) --i;
        else {
            const double diag = d[(i - 1) * m + j - 1];
            const double up = d[(i - 1) * m + j];
            const double left = d[i * m + j - 1];
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        out.path.emplace_back(i, j);
    }
    return out;
}

std::vector<std::vector<double>> scaled_members(const Dataset& full, const Dataset& sampled,
                                                DbaScaling scaling) {
    std::vector<std::vector<double>> out;
    out.reserve(sampled.series.size());
    if (scaling == DbaScaling::Pooled) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& s : full.series)
            for (double v : s.values) {
                sum += v;
                ++count;
            }
        const double mu = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& s : full.series)
            for (double v : s.values) ss += (v - mu) * (v - mu);
        const double sd = std::sqrt(ss / static_cast<double>(count));
        if (!(sd > 0.0))
            throw Error(Errc::ZeroVarianceDataset, fmt::format("dataset '{}' has a single value", full.name));
        for (const auto& s : sampled.series) {
            std::vector<double> z(s.values.size());
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = (s.values[i] - mu) / sd;
            out.push_back(std::move(z));
        }
        return out;
    }
    bool any_spread = false;
    for (const auto& s : sampled.series) {
        const double mu = mean(s.values);
        double ss = 0.0;
        for (double v : s.values) ss += (v - mu) * (v - mu);
        const double sd = std::sqrt(ss / static_cast<double>(s.values.size()));
        any_spread = any_spread || sd > 0.0;
        std::vector<double> z(s.values.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = sd > 0.0 ? (s.values[i] - mu) / sd : 0.0;
        out.push_back(std::move(z));
    }
    if (!any_spread)
        throw Error(Errc::ZeroVarianceDataset, fmt::format("every series of '{}' is constant", full.name));
    return out;
}

}  // namespace

double dtw_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptyInput, "DTW of an empty sequence");
    return std::sqrt(dtw_table(a, b).back());
}

std::string_view dba_scaling_name(DbaScaling s) noexcept {
    return s == DbaScaling::Pooled ? "pooled" : "per_series";
}

DbaScaling parse_dba_scaling(std::string_view text) {
    if (text == "pooled") return DbaScaling::Pooled;
    if (text == "per_series") return DbaScaling::PerSeries;
    throw Error(Errc::InvalidArgument, fmt::format("unknown DBA scaling '{}'", text));
}

Barycenter dba_barycenter(const Dataset& dataset, const DbaOptions& options) {
    if (dataset.series.empty()) throw Error(Errc::EmptyInput, "DBA needs at least one series");
    if (options.max_iter == 0) throw Error(Errc::InvalidArgument, "max_iter must be >= 1");
    const Dataset sampled = sample_series(dataset, options.k, options.seed);
    const auto members = scaled_members(dataset, sampled, options.scaling);
    const std::size_t n = members.size();

    // Medoid among a seeded candidate subset.
    std::vector<std::size_t> candidates(n);
    for (std::size_t i = 0; i < n; ++i) candidates[i] = i;
    const std::size_t n_cand = std::max<std::size_t>(1, std::min(n, options.medoid_candidates));
    if (n_cand < n) {
        Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
        for (std::size_t i = 0; i < n_cand; ++i)
            std::swap(candidates[i], candidates[i + rng.below(n - i)]);
        candidates.resize(n_cand);
        std::sort(candidates.begin(), candidates.end());
    }
    std::vector<double> pair_cost(n_cand * n_cand, 0.0);
    detail::parallel_for(n_cand * n_cand, [&](std::size_t c) {
        const std::size_t a = c / n_cand, b = c % n_cand;
        if (a < b) pair_cost[c] = dtw_table(members[candidates[a]], members[candidates[b]]).back();
    });
    std::size_t medoid = candidates.front();
    double best = kInf;
    for (std::size_t a = 0; a < n_cand; ++a) {
        double total = 0.0;
        for (std::size_t b = 0; b < n_cand; ++b)
            total += a < b ? pair_cost[a * n_cand + b] : pair_cost[b * n_cand + a];
        if (total < best) {
            best = total;
            medoid = candidates[a];
        }
    }

    Barycenter out;
    out.dataset_name = dataset.name;
    out.values = members[medoid];
    const std::size_t len = out.values.size();
    std::vector<Alignment> alignments(n);
    auto align_all = [&] {
        detail::parallel_for(n, [&](std::size_t i) { alignments[i] = align(out.values, members[i]); });
        double total = 0.0;
        for (const auto& a : alignments) total += a.cost;
        return total;
    };

    out.objective.push_back(align_all());
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        std::vector<double> sum(len, 0.0);
        std::vector<std::size_t> count(len, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (auto [ai, mi] : alignments[i].path) {
                sum[ai] += members[i][mi];
                ++count[ai];
            }
        double change = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            const double updated = sum[t] / static_cast<double>(count[t]);
            change += std::fabs(updated - out.values[t]);
            out.values[t] = updated;
        }
        change /= static_cast<double>(len);
        out.iterations_run = it;
        out.objective.push_back(align_all());
        if (change < options.tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace tsxfer
