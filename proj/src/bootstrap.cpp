#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tsxfer/metrics.hpp"
#include "tsxfer/rng.hpp"

namespace tsxfer {

namespace {

/// Linear interpolation between order statistics (sorted input).
double empirical_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

QuantilePath naive_bootstrap_forecast(std::span<const double> train, std::size_t horizon,
                                      std::size_t n_samples, std::uint64_t seed) {
    if (train.size() < 3)
        throw Error(Errc::SeriesTooShort, fmt::format("bootstrap needs >= 3 points, got {}", train.size()));
    if (horizon == 0 || n_samples == 0)
        throw Error(Errc::InvalidArgument, "horizon and sample count must be positive");

    std::vector<double> diffs(train.size() - 1);
    double drift = 0.0;
    for (std::size_t i = 1; i < train.size(); ++i) {
        diffs[i - 1] = train[i] - train[i - 1];
        drift += diffs[i - 1];
    }
    drift /= static_cast<double>(diffs.size());
    for (auto& d : diffs) d -= drift;

    // samples[t][s]
    std::vector<std::vector<double>> samples(horizon, std::vector<double>(n_samples));
    Rng rng(seed);
    const double last = train.back();
    for (std::size_t s = 0; s < n_samples; ++s) {
        double level = last;
        for (std::size_t t = 0; t < horizon; ++t) {
            level += diffs[rng.below(diffs.size())];
            samples[t][s] = level;
        }
    }

    QuantilePath path;
    path.levels = {0.025, 0.5, 0.975};
    path.values.assign(path.levels.size(), std::vector<double>(horizon));
    for (std::size_t t = 0; t < horizon; ++t) {
        std::sort(samples[t].begin(), samples[t].end());
        for (std::size_t l = 0; l < path.levels.size(); ++l)
            path.values[l][t] = empirical_quantile(samples[t], path.levels[l]);
    }
    return path;
}

}  // namespace tsxfer
