// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsxfer/tsxfer.h"

namespace {

int report(tsx_status status) {
    if (status != TSX_OK) std::fprintf(stderr, "error: %s\n", tsx_last_error());
    return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dataset similarity, diversity and forecast evaluation for time series transfer studies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tsx_version());

    std::string config_path, out_dir, features, mode, include, exclude;
    std::uint64_t seed = 0;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"features", "extract basic10/catch24 feature matrices"},
        {"similarity", "feature and DTW distance matrices between sources and targets"},
        {"diversity", "variance-based source diversity"},
        {"pca", "two-component PCA with scatter plots"},
        {"evaluate", "AvgRMSSE, ME and MSIS of the configured forecasts"},
        {"relate", "regressions of performance on similarity and diversity"},
        {"report", "summary document linking all tables and figures"},
        {"all", "run every step from features to report"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "TOML-style run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_option("--features", features, "feature sets")->check(CLI::IsMember({"basic10", "catch24", "both"}));
        sub->add_option("--mode", mode, "mode for relate")->check(CLI::IsMember({"zero_shot", "fine_tuned"}));
        sub->add_option("--include-sources", include, "comma-separated sources admitted to regressions");
        sub->add_option("--exclude-sources", exclude, "comma-separated sources removed from regressions");
    }

    std::string fixture_dir;
    std::uint64_t fixture_seed = 0;
    auto* fixtures = app.add_subcommand("fixtures", "write the bundled synthetic study");
    fixtures->add_option("--out", fixture_dir, "target directory")->required();
    fixtures->add_option("--seed", fixture_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : TSX_ERR_USAGE;
    }

    if (fixtures->parsed()) {
        const int rc = report(tsx_write_fixtures(fixture_dir.c_str(), fixture_seed));
        if (rc == 0) std::printf("fixtures written to %s\n", fixture_dir.c_str());
        return rc;
    }

    auto* sub = app.get_subcommands().front();
    tsx_config* cfg = nullptr;
    if (int rc = report(tsx_config_load(config_path.c_str(), &cfg)); rc != 0) return rc;

    int rc = 0;
    if (rc == 0 && !out_dir.empty()) rc = report(tsx_config_set_output(cfg, out_dir.c_str()));
    if (rc == 0 && sub->count("--seed")) rc = report(tsx_config_set_seed(cfg, seed));
    if (rc == 0 && !features.empty()) rc = report(tsx_config_set_features(cfg, features.c_str()));
    if (rc == 0 && !mode.empty()) rc = report(tsx_config_set_mode(cfg, mode.c_str()));
    if (rc == 0 && (sub->count("--include-sources") || sub->count("--exclude-sources")))
        rc = report(tsx_config_set_source_filter(cfg, sub->count("--include-sources") ? include.c_str() : nullptr,
                                                 sub->count("--exclude-sources") ? exclude.c_str() : nullptr));
    if (rc == 0) {
        rc = report(tsx_run(cfg, sub->get_name().c_str()));
        if (rc == 0) {
            for (size_t i = 0; i < tsx_output_count(cfg); ++i) std::printf("%s\n", tsx_output(cfg, i));
            if (const size_t n = tsx_warning_count(cfg); n > 0)
                std::fprintf(stderr, "%zu warning(s); see the logs directory\n", n);
        }
    }
    tsx_config_free(cfg);
    return rc;
}
