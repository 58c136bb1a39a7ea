#include <doctest.h>

#include <fstream>

#include "../support.hpp"
#include "tsxfer/config.hpp"
#include "tsxfer/io.hpp"

using namespace tsxfer;
namespace fs = std::filesystem;

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

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("tsx_unit_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void touch(const fs::path& p, const std::string& text = "series_id,index,value\na,0,1\na,1,2\n") {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("feature matrix round trip keeps every bit") {
    TempDir dir("fm");
    testing::Gen gen(1);
    Dataset d{"d, quoted", {}, Role::Target};
    for (int i = 0; i < 6; ++i) d.series.push_back({"id" + std::to_string(i), gen.series(30)});
    auto group = standardize_group({feature_matrix(d, FeatureSet::Catch24, 100, 1)});
    const auto& m = group[0];
    write_feature_matrix(m, dir.path / "x" / "m.csv");
    CHECK(fs::exists(dir.path / "x" / "m.json"));
    const auto back = read_feature_matrix(dir.path / "x" / "m.csv");
    CHECK(back.dataset_name == m.dataset_name);
    CHECK(back.role == Role::Target);
    CHECK(back.set == FeatureSet::Catch24);
    CHECK(back.feature_names == m.feature_names);
    CHECK(back.series_ids == m.series_ids);
    CHECK(back.rows == m.rows);
    REQUIRE(back.standardized());
    CHECK(back.standardization->mean == m.standardization->mean);
    CHECK(back.standardization->sd == m.standardization->sd);
}

TEST_CASE("distance matrix, diversity and metric report round trips") {
    TempDir dir("rt");
    DistanceMatrix dm{DistanceKind::Catch22, {"s1", "s2"}, {"t1"}, {{0.1}, {1.0 / 3.0}}};
    write_distance_matrix(dm, dir.path / "d.csv");
    const auto dback = read_distance_matrix(dir.path / "d.csv");
    CHECK(dback.kind == DistanceKind::Catch22);
    CHECK(dback.source_names == dm.source_names);
    CHECK(dback.target_names == dm.target_names);
    CHECK(dback.values == dm.values);

    DiversityTable div{FeatureSet::Basic10, {"a", "b"}, {0.25, 2.0 / 3.0}, {}};
    write_diversity(div, dir.path / "div.csv");
    const auto vback = read_diversity(dir.path / "div.csv", FeatureSet::Basic10);
    CHECK(vback.datasets == div.datasets);
    CHECK(vback.scores == div.scores);

    MetricRow r{"m", Mode::FineTuned, "t", 1.0 / 7.0, -0.5, -1.25, 12.5, 2};
    write_metric_report({r}, dir.path / "metrics.csv");
    const auto mback = read_metric_report(dir.path / "metrics.csv");
    REQUIRE(mback.size() == 1);
    CHECK(mback[0].model == "m");
    CHECK(mback[0].mode == Mode::FineTuned);
    CHECK(mback[0].avg_rmsse == r.avg_rmsse);
    CHECK(mback[0].scaled_me == r.scaled_me);
    CHECK(mback[0].excluded_series == 2);
}

TEST_CASE("forecast round trip and crossing repair") {
    TempDir dir("fc");
    ForecastSet f;
    f.model_name = "m";
    f.target = "t";
    f.entries[{"a", 1}] = {{0.025, 0.5, 0.975}, {{1, 2}, {1.5, 2.5}, {2, 3}}};
    f.entries[{"b", 2}] = {{0.025, 0.5, 0.975}, {{0, 0}, {0.1, 0.2}, {0.3, 0.4}}};
    write_forecasts(f, dir.path / "f.csv");
    const auto back = read_forecasts(dir.path / "f.csv", "m", Mode::ZeroShot, "t");
    REQUIRE(back.entries.size() == 2);
    CHECK(back.find("a", 1)->values == f.entries[{"a", 1}].values);
    CHECK(back.warnings.empty());

    touch(dir.path / "bad.csv",
          "series_id,origin,step,level,value\na,1,1,0.025,3\na,1,1,0.5,2\na,1,1,0.975,1\n");
    const auto fixed = read_forecasts(dir.path / "bad.csv", "m", Mode::ZeroShot, "t");
    CHECK(fixed.find("a", 1)->values == std::vector<std::vector<double>>{{1}, {2}, {3}});
    CHECK_FALSE(fixed.warnings.empty());

    CHECK(code_of([&] { read_forecasts(dir.path / "none.csv", "m", Mode::ZeroShot, "t"); }) == Errc::IoFailure);
}

TEST_CASE("parse_config reads the documented schema") {
    TempDir dir("cfg");
    touch(dir.path / "data" / "a.csv");
    touch(dir.path / "data" / "b.csv");
    touch(dir.path / "fc" / "a_b.csv", "series_id,origin,step,level,value\n");
    const std::string text = R"(# comment
horizon = 5
seed = 42
features = "catch24"
output_dir = "results"
split_ratio = 0.75
dba_scaling = "per_series"
modes = "zero_shot, fine_tuned"
exclude_sources = "x,y"

[[dataset]]
name = "a"
path = "data/a.csv"
role = "source"

[[dataset]]
name = "b"
path = "data/b.csv"
role = "target"

[[forecast]]
model = "a"
mode = "fine_tuned"
target = "b"
path = "fc/a_b.csv"
)";
    const auto cfg = parse_config(text, dir.path);
    CHECK(cfg.horizon == 5);
    CHECK(cfg.seed == 42);
    CHECK(cfg.feature_sets == std::vector<FeatureSet>{FeatureSet::Catch24});
    CHECK(cfg.output_dir == dir.path / "results");
    CHECK(cfg.split_ratio == 0.75);
    CHECK(cfg.split().min_test == 5);
    CHECK(cfg.dba_scaling == DbaScaling::PerSeries);
    CHECK(cfg.modes == std::vector<Mode>{Mode::ZeroShot, Mode::FineTuned});
    CHECK(cfg.sources.exclude == std::vector<std::string>{"x", "y"});
    REQUIRE(cfg.datasets.size() == 2);
    CHECK(cfg.datasets[1].role == Role::Target);
    CHECK(cfg.datasets[0].path == dir.path / "data" / "a.csv");
    REQUIRE(cfg.forecasts.size() == 1);
    CHECK(cfg.forecasts[0].mode == Mode::FineTuned);
    validate_config(cfg);

    const auto defaults = parse_config("", dir.path);
    CHECK(defaults.horizon == 15);
    CHECK(defaults.split_ratio == 0.8);
    CHECK(defaults.sample_k == 1000);
    CHECK(defaults.alpha == 0.05);
    CHECK(defaults.output_dir == dir.path / "out");
}

TEST_CASE("config errors are ConfigInvalid") {
    TempDir dir("cfgerr");
    touch(dir.path / "a.csv");
    CHECK(code_of([&] { parse_config("bogus = 1\n", dir.path); }) == Errc::ConfigInvalid);
    CHECK(code_of([&] { parse_config("horizon = x\n", dir.path); }) == Errc::ConfigInvalid);
    CHECK(code_of([&] { parse_config("horizon 5\n", dir.path); }) == Errc::ConfigInvalid);
    CHECK(code_of([&] { parse_config("features = \"all\"\n", dir.path); }) == Errc::ConfigInvalid);

    const std::string only_source = "[[dataset]]\nname = \"a\"\npath = \"a.csv\"\nrole = \"source\"\n";
    CHECK(code_of([&] { validate_config(parse_config(only_source, dir.path)); }) == Errc::ConfigInvalid);
    const std::string missing = only_source + "[[dataset]]\nname = \"b\"\npath = \"nope.csv\"\nrole = \"target\"\n";
    CHECK(code_of([&] { validate_config(parse_config(missing, dir.path)); }) == Errc::ConfigInvalid);
    const std::string zero_h = "horizon = 0\n" + only_source +
                               "[[dataset]]\nname = \"b\"\npath = \"a.csv\"\nrole = \"target\"\n";
    CHECK(code_of([&] { validate_config(parse_config(zero_h, dir.path)); }) == Errc::ConfigInvalid);
    CHECK(code_of([&] { load_config(dir.path / "missing.toml"); }) == Errc::ConfigInvalid);
}

TEST_CASE("helpers") {
    CHECK(split_list(" a, b ,,c ") == std::vector<std::string>{"a", "b", "c"});
    CHECK(parse_feature_sets("both").size() == 2);
    CHECK(parse_feature_sets("basic10") == std::vector<FeatureSet>{FeatureSet::Basic10});
}
