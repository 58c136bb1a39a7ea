#include <doctest.h>

#include "../support.hpp"
#include "tsxfer/metrics.hpp"

using namespace tsxfer;

namespace {

QuantilePath path3(std::vector<double> lo, std::vector<double> mid, std::vector<double> hi) {
    return {{0.025, 0.5, 0.975}, {std::move(lo), std::move(mid), std::move(hi)}};
}

QuantilePath point(std::vector<double> mid) { return path3(mid, mid, mid); }

ForecastSet forecasts(std::map<std::pair<std::string, std::size_t>, QuantilePath> entries) {
    ForecastSet f;
    f.model_name = "m";
    f.target = "t";
    f.entries = std::move(entries);
    return f;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no tsxfer::Error thrown");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("naive_rmse_past examples") {
    CHECK(naive_rmse_past(std::vector<double>{1, 2, 3, 4, 5}, 5) == 1.0);
    CHECK(naive_rmse_past(std::vector<double>{0, 2, 0, 2}, 4) == 2.0);
    CHECK(naive_rmse_past(std::vector<double>{3, 3, 3}, 3) == 0.0);
    CHECK(naive_rmse_past(std::vector<double>{1, 2, 3, 4, 5, 100}, 5) == 1.0);
    CHECK(code_of([] { naive_rmse_past(std::vector<double>{1, 2}, 1); }) == Errc::InvalidArgument);
}

TEST_CASE("avg_rmsse and avg_me hand examples") {
    const Dataset one{"t", {{"a", {1, 2, 3, 4, 5, 6, 7}}}, Role::Target};
    const auto plan = uniform_plan(one, plan_origins(5, 2, 2));

    const auto perfect = forecasts({{{"a", 1}, point({6, 7})}});
    CHECK(avg_rmsse(one, perfect, plan).value == 0.0);
    CHECK(avg_me(one, perfect, plan) == 0.0);

    const auto flat = forecasts({{{"a", 1}, point({5, 5})}});
    CHECK(avg_rmsse(one, flat, plan).value == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
    CHECK(avg_me(one, flat, plan) == 1.5);

    const Dataset two{"t", {{"a", {1, 2, 3, 4, 5, 6, 7}}, {"b", {0, 2, 0, 2, 0, 2}}}, Role::Target};
    const EvaluationPlan plan2{plan_origins(5, 2, 2), plan_origins(4, 2, 2)};
    const auto both = forecasts({{{"a", 1}, point({5, 5})}, {{"b", 1}, point({2, 0})}});
    CHECK(avg_rmsse(two, both, plan2).value == doctest::Approx((std::sqrt(2.5) + 1.0) / 2.0).epsilon(1e-14));
    CHECK(avg_rmsse(two, both, plan2).value == doctest::Approx(1.2906).epsilon(1e-4));
}

TEST_CASE("avg_me averages over origins") {
    // Origin 1 forecasts [5,5] against [6,7]; origin 2 forecasts [7.5,8.5] against [7,8].
    const Dataset d{"t", {{"a", {1, 2, 3, 4, 5, 6, 7, 8}}}, Role::Target};
    const auto plan = uniform_plan(d, plan_origins(5, 3, 2));
    const auto f = forecasts({{{"a", 1}, point({5, 5})}, {{"a", 2}, point({7.5, 8.5})}});
    CHECK(avg_me(d, f, plan) == 0.5);
}

TEST_CASE("msis hand examples") {
    // Train [0,1] has naive RMSE 1.
    const Dataset d{"t", {{"a", {0, 1, 6}}}, Role::Target};
    const auto plan = uniform_plan(d, plan_origins(2, 1, 1));
    CHECK(msis(d, forecasts({{{"a", 1}, point({6})}}), plan).value == 0.0);
    CHECK(msis(d, forecasts({{{"a", 1}, path3({5}, {6}, {7})}}), plan).value == 2.0);
    const Dataset high{"t", {{"a", {0, 1, 8}}}, Role::Target};
    CHECK(msis(high, forecasts({{{"a", 1}, path3({5}, {6}, {7})}}), plan).value == 42.0);
    const Dataset low{"t", {{"a", {0, 1, 4}}}, Role::Target};
    CHECK(msis(low, forecasts({{{"a", 1}, path3({5}, {6}, {7})}}), plan).value == 42.0);
}

TEST_CASE("metric errors and exclusions") {
    const Dataset d{"t", {{"a", {1, 2, 3, 4, 5, 6, 7}}, {"b", {3, 3, 3, 3, 3, 3, 3}}}, Role::Target};
    const auto plan = uniform_plan(d, plan_origins(5, 2, 2));
    const auto f = forecasts({{{"a", 1}, point({5, 5})}, {{"b", 1}, point({3, 3})}});
    const auto r = avg_rmsse(d, f, plan);
    CHECK(r.excluded_series == 1);
    CHECK(r.value == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
    CHECK(msis(d, f, plan).excluded_series == 1);

    const auto missing = forecasts({{{"a", 1}, point({5, 5})}});
    CHECK(code_of([&] { avg_rmsse(d, missing, plan); }) == Errc::MissingForecast);
    CHECK(code_of([&] { avg_me(d, missing, plan); }) == Errc::MissingForecast);

    auto median_only = forecasts({{{"a", 1}, QuantilePath{{0.5}, {{5, 5}}}}, {{"b", 1}, QuantilePath{{0.5}, {{3, 3}}}}});
    CHECK(avg_rmsse(d, median_only, plan).value > 0.0);
    CHECK(code_of([&] { msis(d, median_only, plan); }) == Errc::MissingQuantile);
}

TEST_CASE("metrics agree with a loop-based oracle on 50 random fixtures") {
    testing::Gen gen(314);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t h = gen.integer(1, 6), train = gen.integer(3, 30), extra = gen.integer(0, 6);
        const std::size_t test = h + extra, origins = extra + 1, m = gen.integer(1, 6);
        Dataset d{"t", {}, Role::Target};
        std::vector<std::vector<double>> series;
        std::vector<std::vector<std::array<std::vector<double>, 3>>> paths(m);
        ForecastSet f;
        f.model_name = "m";
        for (std::size_t i = 0; i < m; ++i) {
            auto y = gen.series(train + test, 10, 3);
            series.push_back(y);
            // Shuffled ids exercise the id-ordered reduction.
            d.series.push_back({"s" + std::to_string((i * 7) % 11), y});
            for (std::size_t r = 0; r < origins; ++r) {
                std::array<std::vector<double>, 3> p;
                for (std::size_t k = 0; k < h; ++k) {
                    const double mid = y[train + r + k] + gen.normal(0, 2);
                    p[0].push_back(mid - gen.uniform(0, 3));
                    p[1].push_back(mid);
                    p[2].push_back(mid + gen.uniform(0, 3));
                }
                paths[i].push_back(p);
                f.entries[{d.series[i].id, r + 1}] = path3(p[0], p[1], p[2]);
            }
        }
        const auto plan = uniform_plan(d, plan_origins(train, test, h));
        const auto want = testing::brute_metrics(series, train, h, origins, paths);
        CHECK(std::fabs(avg_rmsse(d, f, plan).value - want.rmsse) <= 1e-12 * std::max(1.0, want.rmsse));
        CHECK(std::fabs(avg_me(d, f, plan) - want.me) <= 1e-12 * std::max(1.0, std::fabs(want.me)));
        CHECK(std::fabs(msis(d, f, plan).value - want.msis) <= 1e-12 * std::max(1.0, want.msis));
        CHECK(avg_rmsse(d, f, plan).value >= 0.0);
        CHECK(msis(d, f, plan).value >= 0.0);

        // Negating series and forecasts negates every error exactly.
        Dataset neg = d;
        for (auto& s : neg.series)
            for (auto& v : s.values) v = -v;
        ForecastSet fneg = f;
        for (auto& [key, p] : fneg.entries) {
            for (auto& row : p.values)
                for (auto& v : row) v = -v;
            std::swap(p.values[0], p.values[2]);
        }
        CHECK(avg_me(neg, fneg, plan) == -avg_me(d, f, plan));

        // Uniform positive rescaling leaves the scaled metrics unchanged.
        const double k = gen.uniform(0.01, 100);
        Dataset big = d;
        for (auto& s : big.series)
            for (auto& v : s.values) v *= k;
        ForecastSet fbig = f;
        for (auto& [key, p] : fbig.entries)
            for (auto& row : p.values)
                for (auto& v : row) v *= k;
        CHECK(avg_rmsse(big, fbig, plan).value == doctest::Approx(avg_rmsse(d, f, plan).value).epsilon(1e-9));
        CHECK(msis(big, fbig, plan).value == doctest::Approx(msis(d, f, plan).value).epsilon(1e-9));
    }
}

TEST_CASE("scale_me") {
    const auto a = scale_me(std::vector<double>{1, -1});
    CHECK(a.values[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(a.values[1] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
    CHECK_FALSE(a.zero_spread);

    const auto flat = scale_me(std::vector<double>{3, 3, 3});
    CHECK(flat.zero_spread);
    CHECK(flat.values == std::vector<double>{3, 3, 3});

    testing::Gen gen(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = gen.series(gen.integer(2, 12), gen.normal(), gen.uniform(0.1, 5));
        const auto s = scale_me(v).values;
        double m = 0;
        for (double x : s) m += x;
        m /= s.size();
        double ss = 0;
        for (double x : s) ss += (x - m) * (x - m);
        CHECK(std::sqrt(ss / (s.size() - 1)) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> scaled(v);
        for (auto& x : scaled) x *= 4.5;
        const auto s2 = scale_me(scaled).values;
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s2[i] == doctest::Approx(s[i]).epsilon(1e-12));
    }
    CHECK(code_of([] { scale_me(std::vector<double>{1}); }) == Errc::InsufficientPoints);
}

TEST_CASE("normalize_quantile_path sorts levels and repairs crossings") {
    QuantilePath p{{0.975, 0.025, 0.5}, {{3, 1}, {1, 0}, {2, 5}}};
    const auto repaired = normalize_quantile_path(p);
    CHECK(p.levels == std::vector<double>{0.025, 0.5, 0.975});
    CHECK(repaired == 1);
    for (std::size_t t = 0; t < 2; ++t) {
        CHECK(p.values[0][t] <= p.values[1][t]);
        CHECK(p.values[1][t] <= p.values[2][t]);
    }
    CHECK(p.level(0.5 + 1e-12) != nullptr);
    CHECK(p.level(0.6) == nullptr);
}

TEST_CASE("metric_report orders rows and scales ME per target") {
    const Dataset d{"t", {{"a", {1, 2, 3, 4, 5, 6, 7}}}, Role::Target};
    std::vector<ForecastSet> sets;
    for (double bias : {-1.0, 1.0, 3.0}) {
        auto f = forecasts({{{"a", 1}, point({6 - bias, 7 - bias})}});
        f.model_name = bias < 0 ? "b" : "a";
        f.mode = bias > 2 ? Mode::FineTuned : Mode::ZeroShot;
        sets.push_back(f);
    }
    std::vector<std::pair<const Dataset*, const ForecastSet*>> runs;
    for (const auto& f : sets) runs.emplace_back(&d, &f);
    std::vector<std::string> warnings;
    const auto rows = metric_report(runs, {5.0 / 7.0, 2}, 2, warnings);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].model == "a");
    CHECK(rows[0].mode == Mode::ZeroShot);
    CHECK(rows[1].mode == Mode::FineTuned);
    CHECK(rows[2].model == "b");
    CHECK(rows[0].me == doctest::Approx(1.0));
    CHECK(rows[0].scaled_me == doctest::Approx(0.5));
    CHECK(rows[1].scaled_me == doctest::Approx(1.5));
    CHECK(rows[2].scaled_me == doctest::Approx(-0.5));
}

TEST_CASE("naive bootstrap forecaster") {
    const auto flat = naive_bootstrap_forecast(std::vector<double>{4, 4, 4, 4}, 5, 200, 1);
    for (const auto& row : flat.values)
        for (double v : row) CHECK(v == 4.0);

    const auto line = naive_bootstrap_forecast(std::vector<double>{1, 2, 3, 4, 5}, 6, 500, 2);
    CHECK(*line.level(0.5) == std::vector<double>(6, 5.0));

    testing::Gen gen(6);
    auto walk = gen.series(60);
    for (std::size_t t = 1; t < walk.size(); ++t) walk[t] += walk[t - 1];
    const auto a = naive_bootstrap_forecast(walk, 10, 500, 3);
    const auto b = naive_bootstrap_forecast(walk, 10, 500, 3);
    CHECK(a.values == b.values);
    CHECK(a.levels == std::vector<double>{0.025, 0.5, 0.975});
    const auto& lo = *a.level(0.025);
    const auto& hi = *a.level(0.975);
    for (std::size_t t = 0; t < 10; ++t) CHECK(lo[t] <= hi[t]);
    CHECK(hi[9] - lo[9] > hi[0] - lo[0]);

    CHECK(code_of([] { naive_bootstrap_forecast(std::vector<double>{1, 2}, 3, 10, 1); }) == Errc::SeriesTooShort);
}
