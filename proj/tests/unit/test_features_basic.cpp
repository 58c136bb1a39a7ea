#include <doctest.h>

#include "../support.hpp"
#include "tsxfer/features.hpp"

using namespace tsxfer;

namespace {

/// Textbook re-derivation of the ten descriptors.
std::vector<double> brute_basic(const std::vector<double>& y) {
    const double n = static_cast<double>(y.size());
    double energy = 0, sum = 0;
    for (double v : y) {
        energy += v * v;
        sum += v;
    }
    const double m = sum / n;
    double ss = 0;
    for (double v : y) ss += (v - m) * (v - m);
    const double s = std::sqrt(ss / (n - 1));
    double z3 = 0, z4 = 0;
    for (double v : y) {
        z3 += std::pow((v - m) / s, 3);
        z4 += std::pow((v - m) / s, 4);
    }
    const double skew = n / ((n - 1) * (n - 2)) * z3;
    const double kurt = n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * z4 - 3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3));
    double acmax = -1e300;
    for (std::size_t lag = 1; lag <= 5; ++lag) {
        double c = 0;
        for (std::size_t t = lag; t < y.size(); ++t) c += (y[t] - m) * (y[t - lag] - m);
        acmax = std::max(acmax, c / ss);
    }
    std::vector<double> nz;
    for (double v : y)
        if (v != 0) nz.push_back(v);
    double nzm = 0;
    for (double v : nz) nzm += v;
    nzm /= nz.size();
    double nzv = 0;
    for (double v : nz) nzv += (v - nzm) * (v - nzm);
    nzv /= nz.size();
    double sx = 0, sxx = 0, sxy = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        sx += t;
        sxx += double(t) * t;
        sxy += t * y[t];
    }
    const double slope = (n * sxy - sx * sum) / (n * sxx - sx * sx);
    return {energy, n / nz.size(), m, testing::sorted_median(y), kurt, skew, s, acmax, nzv / (nzm * nzm), slope};
}

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("basic features hand examples") {
    const auto a = basic_features(std::vector<double>{1, 2, 3});
    CHECK(a.values[0] == 14.0);
    CHECK(a.values[1] == 1.0);
    CHECK(a.values[2] == 2.0);
    CHECK(a.values[3] == 2.0);
    CHECK(a.values[9] == doctest::Approx(1.0).epsilon(1e-14));

    const auto b = basic_features(std::vector<double>{0, 0, 2, 4});
    CHECK(b.values[1] == 2.0);
    CHECK(b.values[8] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    const auto c = basic_features(std::vector<double>{2, 2, 2});
    CHECK(c.values[6] == 0.0);
    CHECK(c.values[5] == 0.0);
    CHECK(c.values[4] == 0.0);
    CHECK(c.values[7] == 0.0);
    CHECK(c.values[9] == 0.0);
    CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("basic features degenerate inputs stay finite") {
    const auto zero = basic_features(std::vector<double>{0, 0, 0, 0});
    for (double v : zero.values) CHECK(std::isfinite(v));
    CHECK(zero.values[1] == 0.0);
    CHECK(zero.values[8] == 0.0);
    const auto two = basic_features(std::vector<double>{1, 3});
    for (double v : two.values) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(basic_features(std::vector<double>{1}), Error);
}

TEST_CASE("basic features agree with a brute-force derivation on 100 random series") {
    testing::Gen gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
        auto y = gen.series(gen.integer(8, 200), gen.uniform(-5, 5), gen.uniform(0.1, 4));
        for (auto& v : y)
            if (gen.uniform(0, 1) < 0.2) v = 0.0;
        const auto got = basic_features(y).values;
        const auto want = brute_basic(y);
        for (std::size_t f = 0; f < 10; ++f) {
            INFO("trial " << trial << " feature " << f);
            CHECK(close(got[f], want[f]));
        }
    }
}

TEST_CASE("basic features scale as documented") {
    testing::Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto y = gen.series(60, 10, 1);
        for (auto& v : y) v = std::fabs(v) + 0.5;
        std::vector<double> scaled(y.size());
        const double k = gen.uniform(0.2, 7);
        for (std::size_t i = 0; i < y.size(); ++i) scaled[i] = k * y[i];
        const auto a = basic_features(y).values;
        const auto b = basic_features(scaled).values;
        for (std::size_t f : {2, 3, 6}) CHECK(close(b[f], k * a[f]));
        for (std::size_t f : {1, 4, 5, 7, 8}) CHECK(close(b[f], a[f]));
    }
}

TEST_CASE("feature_matrix samples and is deterministic") {
    testing::Gen gen(3);
    Dataset d{"d", {}, Role::Source};
    for (int i = 0; i < 3; ++i) d.series.push_back({"s" + std::to_string(i), gen.series(30)});
    const auto m = feature_matrix(d, FeatureSet::Basic10, 1000, 1);
    CHECK(m.row_count() == 3);
    CHECK(m.feature_count() == 10);
    CHECK_FALSE(m.standardized());
    CHECK(feature_matrix(d, FeatureSet::Basic10, 1000, 1).rows == m.rows);

    Dataset big{"big", {}, Role::Source};
    for (int i = 0; i < 2000; ++i) big.series.push_back({"s" + std::to_string(i), {1.0 * i, 2.0, 0.5 * i}});
    const auto bm = feature_matrix(big, FeatureSet::Basic10, 1000, 9);
    CHECK(bm.row_count() == 1000);
}

TEST_CASE("feature_matrix attaches the series id to errors") {
    Dataset d{"d", {{"short", {1.0, 2.0}}}, Role::Source};
    try {
        feature_matrix(d, FeatureSet::Catch24, 10, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SeriesTooShort);
        CHECK(std::string(e.what()).find("short") != std::string::npos);
    }
}

TEST_CASE("standardize_group") {
    auto single = [](std::string name, std::vector<double> col) {
        FeatureMatrix m;
        m.dataset_name = std::move(name);
        m.feature_names = {"f"};
        for (std::size_t i = 0; i < col.size(); ++i) {
            m.series_ids.push_back(std::to_string(i));
            m.rows.push_back({col[i]});
        }
        return m;
    };
    const auto one = standardize_group({single("a", {0, 2})});
    CHECK(one[0].rows[0][0] == -1.0);
    CHECK(one[0].rows[1][0] == 1.0);
    CHECK(one[0].standardized());

    const auto two = standardize_group({single("a", {0, 2}), single("b", {4, 6})});
    CHECK(two[0].rows[0][0] == doctest::Approx(-1.3416).epsilon(1e-4));
    CHECK(two[0].rows[1][0] == doctest::Approx(-0.4472).epsilon(1e-4));
    CHECK(two[1].rows[0][0] == doctest::Approx(0.4472).epsilon(1e-4));
    CHECK(two[1].rows[1][0] == doctest::Approx(1.3416).epsilon(1e-4));

    const auto flat = standardize_group({single("a", {3, 3}), single("b", {3})});
    CHECK(flat[0].rows[0][0] == 0.0);
    CHECK_FALSE(flat[0].warnings.empty());

    CHECK_THROWS_AS(standardize_group(one), Error);
}

TEST_CASE("standardized features have pooled mean 0 and sd 1") {
    testing::Gen gen(8);
    std::vector<FeatureMatrix> group;
    for (int g = 0; g < 3; ++g) {
        Dataset d{"d" + std::to_string(g), {}, Role::Source};
        for (int i = 0; i < 25; ++i) d.series.push_back({"s" + std::to_string(i), gen.series(40, g, 1 + g)});
        group.push_back(feature_matrix(d, FeatureSet::Basic10, 1000, 1));
    }
    const auto z = standardize_group(group);
    for (std::size_t f = 0; f < 10; ++f) {
        double s = 0, ss = 0, n = 0;
        for (const auto& m : z)
            for (const auto& r : m.rows) {
                s += r[f];
                ss += r[f] * r[f];
                ++n;
            }
        CHECK(std::fabs(s / n) < 1e-9);
        if (z[0].standardization->sd[f] > 0.0)
            CHECK(std::fabs(std::sqrt(ss / n - (s / n) * (s / n)) - 1.0) < 1e-9);
    }
}
