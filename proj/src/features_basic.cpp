#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "tsxfer/features.hpp"

namespace tsxfer {

namespace {

const std::vector<std::string> kBasicNames = {
    "absolute_energy", "intermittency",      "mean",
    "median",          "kurtosis",           "skewness",
    "standard_deviation", "agg_autocorrelation_max", "lumpyness",
    "linear_trend",
};

const std::vector<std::string> kCatch24Names = {
    "mode_5",           "mode_10",          "acf_timescale",      "acf_first_min",
    "ami2",             "trev",             "high_fluctuation",   "stretch_high",
    "transition_matrix", "periodicity",     "embedding_dist",     "ami_timescale",
    "whiten_timescale", "outlier_timing_pos", "outlier_timing_neg", "centroid_freq",
    "stretch_decreasing", "entropy_pairs",  "rs_range",           "dfa",
    "low_freq_power",   "forecast_error",   "mean",               "sd",
};

double median_of(std::vector<double> v) {
    const auto n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return (lower + upper) / 2.0;
}

}  // namespace

std::string_view feature_set_name(FeatureSet set) noexcept {
    return set == FeatureSet::Basic10 ? "basic10" : "catch24";
}

FeatureSet parse_feature_set(std::string_view text) {
    if (text == "basic10") return FeatureSet::Basic10;
    if (text == "catch24") return FeatureSet::Catch24;
    throw Error(Errc::InvalidArgument, fmt::format("unknown feature set '{}'", text));
}

const std::vector<std::string>& feature_names(FeatureSet set) {
    return set == FeatureSet::Basic10 ? kBasicNames : kCatch24Names;
}

FeatureVector basic_features(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) throw Error(Errc::SeriesTooShort, fmt::format("basic features need n >= 2, got {}", n));
    const double nd = static_cast<double>(n);

    FeatureVector out;
    out.names = kBasicNames;
    out.values.assign(kBasicNames.size(), 0.0);
    auto& v = out.values;

    double energy = 0.0, sum = 0.0;
    for (double x : y) {
        energy += x * x;
        sum += x;
    }
    const double mean = sum / nd;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : y) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double sum_sq_dev = m2;
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    const bool constant = sum_sq_dev == 0.0;

    v[0] = energy;
    v[2] = mean;
    v[3] = median_of({y.begin(), y.end()});
    v[6] = std::sqrt(sum_sq_dev / (nd - 1.0));

    // kurtosis (G2, excess)
    if (constant) {
        out.warnings.emplace_back("kurtosis: constant series");
    } else if (n < 4) {
        out.warnings.emplace_back("kurtosis: fewer than 4 observations");
    } else {
        const double g2 = m4 / (m2 * m2) - 3.0;
        v[4] = ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
    }
    // skewness (G1)
    if (constant) {
        out.warnings.emplace_back("skewness: constant series");
    } else if (n < 3) {
        out.warnings.emplace_back("skewness: fewer than 3 observations");
    } else {
        const double g1 = m3 / std::pow(m2, 1.5);
        v[5] = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
    }

    // max biased autocorrelation over lags 1..5
    if (constant) {
        out.warnings.emplace_back("agg_autocorrelation_max: constant series");
    } else {
        double best = -std::numeric_limits<double>::infinity();
        const std::size_t max_lag = std::min<std::size_t>(5, n - 1);
        for (std::size_t lag = 1; lag <= max_lag; ++lag) {
            double acc = 0.0;
            for (std::size_t t = 0; t + lag < n; ++t) acc += (y[t] - mean) * (y[t + lag] - mean);
            best = std::max(best, acc / sum_sq_dev);
        }
        v[7] = best;
    }

    // intermittency and lumpyness over the non-zero observations
    std::size_t nonzero = 0;
    double nz_sum = 0.0;
    for (double x : y)
        if (x != 0.0) {
            ++nonzero;
            nz_sum += x;
        }
    if (nonzero == 0) {
        out.warnings.emplace_back("intermittency: all-zero series");
        out.warnings.emplace_back("lumpyness: all-zero series");
    } else {
        v[1] = nd / static_cast<double>(nonzero);
        const double nz_mean = nz_sum / static_cast<double>(nonzero);
        double nz_var = 0.0;
        for (double x : y)
            if (x != 0.0) nz_var += (x - nz_mean) * (x - nz_mean);
        nz_var /= static_cast<double>(nonzero);
        if (nz_mean == 0.0)
            out.warnings.emplace_back("lumpyness: non-zero values have zero mean");
        else
            v[8] = nz_var / (nz_mean * nz_mean);
    }

    // OLS slope against 0..n-1
    const double t_mean = (nd - 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        sxy += dt * (y[t] - mean);
        sxx += dt * dt;
    }
    v[9] = sxy / sxx;
    return out;
}

FeatureVector extract_features(std::span<const double> values, FeatureSet set) {
    return set == FeatureSet::Basic10 ? basic_features(values) : catch24_features(values);
}

FeatureMatrix feature_matrix(const Dataset& dataset, FeatureSet set, std::size_t k,
                             std::uint64_t seed) {
    const Dataset sampled = sample_series(dataset, k, seed);
    const std::size_t n = sampled.series.size();

    std::vector<FeatureVector> results(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                results[i] = extract_features(sampled.series[i].values, set);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || n < 64) {
        work(0, n);
    } else {
        // Each row is written to its own slot, so the result does not depend
        // on scheduling.
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back(work, b, std::min(n, b + chunk));
    }

    FeatureMatrix m;
    m.dataset_name = dataset.name;
    m.role = dataset.role;
    m.set = set;
    m.feature_names = feature_names(set);
    m.series_ids.reserve(n);
    m.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& id = sampled.series[i].id;
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.code(), fmt::format("series '{}' in '{}': {}", id, dataset.name,
                                                  e.what()));
            }
        }
        m.series_ids.push_back(id);
        m.rows.push_back(std::move(results[i].values));
        for (const auto& w : results[i].warnings) m.warnings.push_back(fmt::format("{}: {}", id, w));
    }
    return m;
}

}  // namespace tsxfer
