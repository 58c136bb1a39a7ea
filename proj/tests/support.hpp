#pragma once

// Shared helpers for the test binaries: fixture loading, random generators
// and independent reference computations ("oracles") written without reuse of
// library code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(TSX_FIXTURE_DIR) + "/" + name; }

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

inline double to_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

/// Fixture series in file order.
struct NamedSeries {
    std::string id;
    std::vector<double> values;
};

inline std::vector<NamedSeries> catch24_series() {
    std::vector<NamedSeries> out;
    const auto rows = read_csv(fixture_path("catch24_series.csv"));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (out.empty() || out.back().id != rows[r][0]) out.push_back({rows[r][0], {}});
        out.back().values.push_back(to_double(rows[r][2]));
    }
    return out;
}

struct ReferenceRow {
    std::string id;
    std::vector<double> values;
};

/// Reference outputs; `affine` selects the file computed on 3y + 11.
inline std::pair<std::vector<std::string>, std::vector<ReferenceRow>> catch24_reference(bool affine = false) {
    const auto rows = read_csv(fixture_path(affine ? "catch24_reference_affine.csv" : "catch24_reference.csv"));
    std::vector<std::string> names(rows[0].begin() + 1, rows[0].end());
    std::vector<ReferenceRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ReferenceRow row{rows[r][0], {}};
        for (std::size_t c = 1; c < rows[r].size(); ++c) row.values.push_back(to_double(rows[r][c]));
        out.push_back(std::move(row));
    }
    return {names, out};
}

/// |a - b| within 1e-6 absolute or 1e-4 relative, whichever is looser.
inline bool catch24_close(double port, double ref) {
    if (std::isnan(ref)) return port == 0.0;
    return std::fabs(port - ref) <= std::max(1e-6, 1e-4 * std::fabs(ref));
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal(double mu = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mu, sd)(rng_); }
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    std::vector<double> series(std::size_t n, double mu = 0.0, double sd = 1.0) {
        std::vector<double> v(n);
        for (auto& x : v) x = normal(mu, sd);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

// ---- oracles ---------------------------------------------------------------

/// Minimum over every monotone warping path of the summed squared cost,
/// accumulated from the start of the path; returns the square root.
inline double dtw_all_paths(const std::vector<double>& a, const std::vector<double>& b) {
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
        acc = acc + (a[i] - b[j]) * (a[i] - b[j]);
        if (i + 1 == a.size() && j + 1 == b.size()) {
            best = std::min(best, acc);
            return;
        }
        if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, acc);
        if (i + 1 < a.size()) walk(i + 1, j, acc);
        if (j + 1 < b.size()) walk(i, j + 1, acc);
    };
    walk(0, 0, 0.0);
    return std::sqrt(best);
}

inline double sorted_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// rows[i][p] enumeration of the median feature distance.
inline double median_distance_enumeration(const std::vector<std::vector<double>>& src,
                                           const std::vector<std::vector<double>>& tgt) {
    std::vector<double> per_feature;
    for (std::size_t p = 0; p < src.front().size(); ++p) {
        std::vector<double> d;
        for (const auto& a : src)
            for (const auto& b : tgt) d.push_back(std::fabs(a[p] - b[p]));
        per_feature.push_back(sorted_median(d));
    }
    return sorted_median(per_feature);
}

/// Two-sided p-value of a t statistic by Simpson integration of the density.
inline double t_two_sided_numeric(double t, double dof) {
    const double c = std::tgamma((dof + 1) / 2) / (std::sqrt(dof * M_PI) * std::tgamma(dof / 2));
    auto f = [&](double x) { return c * std::pow(1 + x * x / dof, -(dof + 1) / 2); };
    const double a = 0.0, b = std::fabs(t);
    const int n = 200000;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    const double central = 2.0 * s * h / 3.0;  // P(|T| < |t|)
    return 1.0 - central;
}

struct BruteMetrics {
    double rmsse = 0, me = 0, msis = 0;
};

/// Loop-based metrics for one uniform plan. series[i] is the full series,
/// paths[i][r] = {lo, mid, hi} rows of length h.
inline BruteMetrics brute_metrics(const std::vector<std::vector<double>>& series, std::size_t train,
                                  std::size_t h, std::size_t origins,
                                  const std::vector<std::vector<std::array<std::vector<double>, 3>>>& paths,
                                  double alpha = 0.05) {
    BruteMetrics out;
    for (std::size_t r = 0; r < origins; ++r) {
        const std::size_t tr = train + r;
        double s_rmsse = 0, s_me = 0, s_msis = 0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const auto& y = series[i];
            double naive = 0;
            for (std::size_t t = 1; t < tr; ++t) naive += std::pow(y[t] - y[t - 1], 2);
            naive = std::sqrt(naive / (tr - 1));
            double se = 0, e = 0, is = 0;
            for (std::size_t k = 0; k < h; ++k) {
                const double yt = y[tr + k];
                const double lo = paths[i][r][0][k], mid = paths[i][r][1][k], hi = paths[i][r][2][k];
                se += std::pow(yt - mid, 2);
                e += yt - mid;
                is += (hi - lo) + (2 / alpha) * (lo - yt) * (yt < lo) + (2 / alpha) * (yt - hi) * (yt > hi);
            }
            s_rmsse += std::sqrt(se / h) / naive;
            s_me += e / h;
            s_msis += is / h / naive;
        }
        out.rmsse += s_rmsse / series.size();
        out.me += s_me / series.size();
        out.msis += s_msis / series.size();
    }
    out.rmsse /= origins;
    out.me /= origins;
    out.msis /= origins;
    return out;
}

}  // namespace testing
