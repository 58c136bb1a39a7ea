#include <doctest.h>

#include <algorithm>
#include <set>

#include "../support.hpp"
#include "tsxfer/core.hpp"
#include "tsxfer/rng.hpp"

using namespace tsxfer;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no tsxfer::Error thrown");
    return Errc::InvalidArgument;
}

Dataset numbered(std::size_t count, std::size_t length = 3) {
    Dataset d{"d", {}, Role::Source};
    for (std::size_t i = 0; i < count; ++i) d.series.push_back({"s" + std::to_string(i), std::vector<double>(length, 1.0 * i)});
    return d;
}

}  // namespace

TEST_CASE("parse_dataset reads the long layout") {
    const auto d = parse_dataset("series_id,index,value\na,0,1.0\na,1,2.0\nb,0,5.0\nb,1,5.0\n", "x", Role::Target);
    REQUIRE(d.series.size() == 2);
    CHECK(d.series[0].id == "a");
    CHECK(d.series[0].values == std::vector<double>{1.0, 2.0});
    CHECK(d.series[1].values == std::vector<double>{5.0, 5.0});
    CHECK(d.role == Role::Target);
}

TEST_CASE("parse_dataset orders rows by index and tolerates column order") {
    const auto d = parse_dataset("value,series_id,index\n1.0,a,0\n3.0,a,2\n2.0,a,1\n", "x", Role::Source);
    CHECK(d.series[0].values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("parse_dataset errors") {
    CHECK(code_of([] { parse_dataset("series_id,index,value\na,0,NaN\na,1,1\n", "x", Role::Source); }) ==
          Errc::NonFiniteValue);
    CHECK(code_of([] { parse_dataset("series_id,index,value\na,0,inf\na,1,1\n", "x", Role::Source); }) ==
          Errc::NonFiniteValue);
    CHECK(code_of([] { parse_dataset("series_id,value\na,1\n", "x", Role::Source); }) == Errc::MissingColumn);
    CHECK(code_of([] { parse_dataset("series_id,index,value\n", "x", Role::Source); }) == Errc::EmptyFile);
    CHECK(code_of([] { parse_dataset("", "x", Role::Source); }) == Errc::EmptyFile);
    CHECK(code_of([] { parse_dataset("series_id,index,value\na,0,1\na,0,2\n", "x", Role::Source); }) ==
          Errc::DuplicateIndex);
    CHECK(code_of([] { parse_dataset("series_id,index,value\na,0,1\n", "x", Role::Source); }) ==
          Errc::SeriesTooShort);
    try {
        parse_dataset("series_id,index,value\na,0,1\na,1,abc\n", "x", Role::Source, "f.csv");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("f.csv:3") != std::string::npos);
    }
}

TEST_CASE("load_dataset names the dataset after the file stem") {
    const auto path = std::filesystem::temp_directory_path() / "tsx_core_stem.csv";
    {
        std::ofstream out(path);
        out << "series_id,index,value\na,0,1\na,1,2\n";
    }
    CHECK(load_dataset(path, Role::Source).name == "tsx_core_stem");
    CHECK(load_dataset(path, Role::Source, "other").name == "other");
    std::filesystem::remove(path);
    CHECK(code_of([&] { load_dataset(path, Role::Source); }) == Errc::IoFailure);
}

TEST_CASE("split points") {
    CHECK(split_point(100, {0.8, 15}) == 80);
    CHECK(split_point(50, {0.8, 15}) == 35);
    CHECK(split_point(17, {0.8, 15}) == 2);
    CHECK(code_of([] { split_point(16, {0.8, 15}); }) == Errc::SeriesTooShort);
    CHECK(code_of([] { split_point(100, {1.0, 15}); }) == Errc::InvalidArgument);
}

TEST_CASE("split then concatenate reproduces every series") {
    testing::Gen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = gen.integer(17, 300);
        const double ratio = gen.uniform(0.05, 0.95);
        const std::size_t min_test = gen.integer(1, 15);
        Dataset d{"d", {{"a", gen.series(len)}}, Role::Source};
        const auto [train, test] = train_test_split(d, {ratio, min_test});
        auto joined = train.series[0].values;
        joined.insert(joined.end(), test.series[0].values.begin(), test.series[0].values.end());
        CHECK(joined == d.series[0].values);
        CHECK(test.series[0].length() >= min_test);
    }
}

TEST_CASE("plan_origins matches the rolling-origin counts") {
    const std::pair<std::size_t, std::size_t> rows[] = {{130, 32}, {124, 31}, {91, 23}, {68, 17}, {35, 15}};
    const std::size_t expected[] = {18, 17, 9, 3, 1};
    for (std::size_t i = 0; i < 5; ++i) {
        const auto plan = plan_origins(rows[i].first, rows[i].second, 15);
        CHECK(plan.count() == expected[i]);
        CHECK(plan.origins.front() == rows[i].first);
        CHECK(plan.origins.back() + 15 == rows[i].first + rows[i].second);
        CHECK(std::is_sorted(plan.origins.begin(), plan.origins.end()));
    }
    CHECK(plan_origins(35, 15, 15).origins == std::vector<std::size_t>{35});
    CHECK(code_of([] { plan_origins(10, 14, 15); }) == Errc::HorizonExceedsTest);
    CHECK(code_of([] { plan_origins(10, 14, 0); }) == Errc::InvalidArgument);
}

TEST_CASE("sample_series") {
    CHECK(sample_series(numbered(137), 1000, 1).series.size() == 137);

    const auto a = sample_series(numbered(5), 2, 7);
    const auto b = sample_series(numbered(5), 2, 7);
    REQUIRE(a.series.size() == 2);
    CHECK(a.series[0].id == b.series[0].id);
    CHECK(a.series[1].id == b.series[1].id);

    const auto big = sample_series(numbered(2000), 1000, 3);
    std::set<std::string> ids;
    for (const auto& s : big.series) ids.insert(s.id);
    CHECK(ids.size() == 1000);

    // Input order does not matter.
    auto shuffled = numbered(50);
    std::reverse(shuffled.series.begin(), shuffled.series.end());
    const auto x = sample_series(numbered(50), 10, 99);
    const auto y = sample_series(shuffled, 10, 99);
    for (std::size_t i = 0; i < 10; ++i) CHECK(x.series[i].id == y.series[i].id);

    CHECK(code_of([] { sample_series(numbered(3), 0, 1); }) == Errc::InvalidArgument);
}

TEST_CASE("Rng is reproducible and bounded") {
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        CHECK(r.below(7) < 7);
        const double u = r.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("error classes") {
    CHECK(error_class(Errc::ConfigInvalid) == ErrorClass::Usage);
    CHECK(error_class(Errc::UpstreamMissing) == ErrorClass::Data);
    CHECK(error_class(Errc::DegenerateX) == ErrorClass::Numeric);
    CHECK(std::string(Error(Errc::NoOverlap, "x").what()) == "NoOverlap: x");
}
