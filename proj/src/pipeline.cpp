#include "tsxfer/pipeline.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "csv.hpp"
#include "svg.hpp"
#include "tsxfer/io.hpp"

namespace tsxfer {

namespace {

struct Context {
    const RunConfig& config;
    CommandResult result;

    fs::path out(const fs::path& rel) const { return config.output_dir / rel; }

    void wrote(const fs::path& rel) { result.files.push_back(rel.generic_string()); }

    void warn(std::string w) { result.warnings.push_back(std::move(w)); }

    void finish_log(std::string_view command) {
        std::string text;
        for (const auto& w : result.warnings) text += w + "\n";
        const fs::path rel = fs::path("logs") / fmt::format("{}.log", command);
        csv::write_file(out(rel).string(), text);
        wrote(rel);
    }
};

fs::path feature_path(FeatureSet set, const std::string& dataset) {
    return fs::path("features") / std::string(feature_set_name(set)) / (dataset + ".csv");
}

fs::path distance_path(DistanceKind kind) {
    return fs::path("similarity") / fmt::format("dist_{}.csv", distance_kind_name(kind));
}

fs::path diversity_path(FeatureSet set) {
    return fs::path("diversity") / fmt::format("div_{}.csv", feature_set_name(set));
}

const fs::path kMetricsPath = fs::path("evaluate") / "metrics.csv";

void require_upstream(const Context& ctx, const fs::path& rel, std::string_view producer) {
    if (!fs::is_regular_file(ctx.out(rel)))
        throw Error(Errc::UpstreamMissing,
                    fmt::format("'{}' not found; run the '{}' command first", ctx.out(rel).string(), producer));
}

std::vector<const DatasetEntry*> entries(const RunConfig& c, std::optional<Role> role) {
    std::vector<const DatasetEntry*> out;
    for (const auto& d : c.datasets)
        if (!role || d.role == *role) out.push_back(&d);
    return out;
}

Dataset load_entry(const DatasetEntry& e) { return load_dataset(e.path, e.role, e.name); }

/// The training part of every series; features and representatives never
/// see the evaluation window.
Dataset training_part(const Dataset& d, const RunConfig& c) { return train_test_split(d, c.split()).first; }

std::vector<FeatureMatrix> load_features(Context& ctx, FeatureSet set, std::optional<Role> role) {
    std::vector<FeatureMatrix> out;
    for (const auto* e : entries(ctx.config, role)) {
        const auto rel = feature_path(set, e->name);
        require_upstream(ctx, rel, "features");
        out.push_back(read_feature_matrix(ctx.out(rel)));
    }
    return out;
}

std::string md_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out = "|";
    for (const auto& h : header) out += " " + h + " |";
    out += "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? "---|" : "---:|";
    out += "\n";
    for (const auto& r : rows) {
        out += "|";
        for (const auto& c : r) out += " " + c + " |";
        out += "\n";
    }
    return out;
}

std::string fixed(double v) { return fmt::format("{:.4f}", v); }

std::vector<Mode> relate_modes(const RunConfig& c, const std::vector<MetricRow>& metrics) {
    if (!c.modes.empty()) return c.modes;
    std::vector<Mode> modes;
    for (Mode m : {Mode::ZeroShot, Mode::FineTuned, Mode::Scratch, Mode::Benchmark})
        for (const auto& r : metrics)
            if (r.mode == m) {
                modes.push_back(m);
                break;
            }
    return modes;
}

fs::path relations_path(Mode m) { return fs::path("relate") / fmt::format("relations_{}.csv", mode_name(m)); }

}  // namespace

CommandResult cmd_features(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    for (const auto* e : entries(config, std::nullopt)) {
        const Dataset train = training_part(load_entry(*e), config);
        for (FeatureSet set : config.feature_sets) {
            const auto m = feature_matrix(train, set, config.sample_k, config.seed);
            for (const auto& w : m.warnings) ctx.warn(fmt::format("{}/{}: {}", feature_set_name(set), e->name, w));
            const auto rel = feature_path(set, e->name);
            write_feature_matrix(m, ctx.out(rel));
            ctx.wrote(rel);
            ctx.wrote(fs::path(rel).replace_extension(".json"));
        }
    }
    ctx.finish_log("features");
    return ctx.result;
}

CommandResult cmd_similarity(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    for (FeatureSet set : config.feature_sets) {
        auto sources = standardize_group(load_features(ctx, set, Role::Source));
        auto targets = standardize_group(load_features(ctx, set, Role::Target));
        for (const auto* group : {&sources, &targets})
            for (const auto& w : group->front().warnings)
                if (w.rfind("ZeroVarianceFeature", 0) == 0)
                    ctx.warn(fmt::format("{}/{} group: {}", feature_set_name(set), role_name(group->front().role), w));
        const auto dm = distance_matrix(sources, targets);
        write_distance_matrix(dm, ctx.out(distance_path(dm.kind)));
        ctx.wrote(distance_path(dm.kind));
    }

    DbaOptions opt;
    opt.k = config.sample_k;
    opt.seed = config.seed;
    opt.max_iter = config.dba_max_iter;
    opt.tol = config.dba_tol;
    opt.scaling = config.dba_scaling;
    std::vector<Barycenter> sources, targets;
    for (const auto* e : entries(config, std::nullopt)) {
        auto b = dba_barycenter(training_part(load_entry(*e), config), opt);
        if (!b.converged)
            ctx.warn(fmt::format("DBA for '{}' stopped after {} iterations without converging", e->name,
                                 b.iterations_run));
        const auto rel = fs::path("similarity") / "barycenters" / (e->name + ".csv");
        write_barycenter(b, ctx.out(rel));
        ctx.wrote(rel);
        ctx.wrote(fs::path(rel).replace_extension(".json"));
        (e->role == Role::Source ? sources : targets).push_back(std::move(b));
    }
    const auto dtw = dtw_distance_matrix(sources, targets);
    write_distance_matrix(dtw, ctx.out(distance_path(DistanceKind::Dtw)));
    ctx.wrote(distance_path(DistanceKind::Dtw));
    ctx.finish_log("similarity");
    return ctx.result;
}

CommandResult cmd_diversity(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    for (FeatureSet set : config.feature_sets) {
        const auto table = diversity_scores(load_features(ctx, set, Role::Source));
        for (const auto& w : table.warnings) ctx.warn(fmt::format("{}: {}", feature_set_name(set), w));
        write_diversity(table, ctx.out(diversity_path(set)));
        ctx.wrote(diversity_path(set));
    }
    ctx.finish_log("diversity");
    return ctx.result;
}

CommandResult cmd_pca(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    for (FeatureSet set : config.feature_sets) {
        const auto pooled = standardize_group(load_features(ctx, set, std::nullopt));
        const auto pca = pca2(pooled);
        for (const auto& w : pca.warnings) ctx.warn(fmt::format("{}: {}", feature_set_name(set), w));
        const std::string prefix(feature_set_name(set));
        write_pca(pca, ctx.out("pca"), prefix);
        for (const char* suffix : {"_loadings.csv", "_ratios.csv", "_projections.csv"})
            ctx.wrote(fs::path("pca") / (prefix + suffix));
        const auto svg_rel = fs::path("pca") / (prefix + "_scatter.svg");
        csv::write_file(ctx.out(svg_rel).string(), svg::pca_scatter(pca, fmt::format("PCA of {} features", prefix)));
        ctx.wrote(svg_rel);
    }
    ctx.finish_log("pca");
    return ctx.result;
}

CommandResult cmd_evaluate(const RunConfig& config) {
    validate_config(config);
    if (config.forecasts.empty()) throw Error(Errc::ConfigInvalid, "no [[forecast]] entries to evaluate");
    Context ctx{config, {}};
    std::map<std::string, Dataset> targets;
    for (const auto* e : entries(config, Role::Target)) targets.emplace(e->name, load_entry(*e));
    std::vector<ForecastSet> sets;
    sets.reserve(config.forecasts.size());
    for (const auto& f : config.forecasts) {
        sets.push_back(read_forecasts(f.path, f.model, f.mode, f.target));
        for (const auto& w : sets.back().warnings)
            ctx.warn(fmt::format("{}/{}/{}: {}", f.model, mode_name(f.mode), f.target, w));
    }
    std::vector<std::pair<const Dataset*, const ForecastSet*>> runs;
    for (const auto& s : sets) runs.emplace_back(&targets.at(s.target), &s);
    const auto rows = metric_report(runs, config.split(), config.horizon, ctx.result.warnings);
    write_metric_report(rows, ctx.out(kMetricsPath));
    ctx.wrote(kMetricsPath);
    ctx.finish_log("evaluate");
    return ctx.result;
}

CommandResult cmd_relate(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    require_upstream(ctx, kMetricsPath, "evaluate");
    RelationInputs in;
    in.metrics = read_metric_report(ctx.out(kMetricsPath));
    for (FeatureSet set : config.feature_sets) {
        require_upstream(ctx, distance_path(distance_kind(set)), "similarity");
        in.distances.push_back(read_distance_matrix(ctx.out(distance_path(distance_kind(set)))));
    }
    require_upstream(ctx, distance_path(DistanceKind::Dtw), "similarity");
    in.distances.push_back(read_distance_matrix(ctx.out(distance_path(DistanceKind::Dtw))));
    for (FeatureSet set : config.feature_sets) {
        require_upstream(ctx, diversity_path(set), "diversity");
        in.diversity.push_back(read_diversity(ctx.out(diversity_path(set)), set));
    }

    for (Mode mode : relate_modes(config, in.metrics)) {
        const auto fits = relation_table(in, mode, config.sources, ctx.result.warnings);
        write_relations(fits, ctx.out(relations_path(mode)));
        ctx.wrote(relations_path(mode));

        // One plot per (characteristic, metric); fits arrive grouped by target.
        std::map<std::pair<Characteristic, MetricKind>, std::vector<const RelationFit*>> panels;
        for (const auto& f : fits) panels[{f.characteristic, f.metric}].push_back(&f);
        for (const auto& [key, group] : panels) {
            const auto name = fmt::format("{}_{}_{}", characteristic_name(key.first), metric_kind_name(key.second),
                                          mode_name(mode));
            const auto rel = fs::path("relate") / "plots" / (name + ".svg");
            csv::write_file(ctx.out(rel).string(), svg::relation_plot(group, name));
            ctx.wrote(rel);
        }
    }
    ctx.finish_log("relate");
    return ctx.result;
}

CommandResult cmd_report(const RunConfig& config) {
    validate_config(config);
    Context ctx{config, {}};
    std::string md = "# Transfer study report\n\n";
    md += fmt::format("Horizon {}, split ratio {}, sample size {}, seed {}.\n\n", config.horizon, config.split_ratio,
                      config.sample_k, config.seed);

    md += "## Datasets\n\n";
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& d : config.datasets) {
            const auto ds = load_entry(d);
            rows.push_back({d.name, std::string(role_name(d.role)), std::to_string(ds.series.size())});
        }
        md += md_table({"dataset", "role", "series"}, rows) + "\n";
    }

    md += "## Similarity\n\n";
    std::vector<DistanceKind> kinds;
    for (FeatureSet set : config.feature_sets) kinds.push_back(distance_kind(set));
    kinds.push_back(DistanceKind::Dtw);
    for (DistanceKind kind : kinds) {
        require_upstream(ctx, distance_path(kind), "similarity");
        const auto dm = read_distance_matrix(ctx.out(distance_path(kind)));
        std::vector<std::string> header{"source"};
        header.insert(header.end(), dm.target_names.begin(), dm.target_names.end());
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 0; n < dm.source_names.size(); ++n) {
            std::vector<std::string> row{dm.source_names[n]};
            for (double v : dm.values[n]) row.push_back(fixed(v));
            rows.push_back(std::move(row));
        }
        md += fmt::format("### {} distances ([csv]({}))\n\n", distance_kind_name(kind),
                          distance_path(kind).generic_string());
        md += md_table(header, rows) + "\n";
    }

    md += "## Source diversity\n\n";
    {
        std::vector<std::string> header{"dataset"};
        std::vector<DiversityTable> tables;
        for (FeatureSet set : config.feature_sets) {
            require_upstream(ctx, diversity_path(set), "diversity");
            tables.push_back(read_diversity(ctx.out(diversity_path(set)), set));
            header.emplace_back(feature_set_name(set));
        }
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < tables.front().datasets.size(); ++i) {
            std::vector<std::string> row{tables.front().datasets[i]};
            for (const auto& t : tables) row.push_back(fixed(t.scores[i]));
            rows.push_back(std::move(row));
        }
        md += md_table(header, rows) + "\n";
    }

    md += "## PCA\n\n";
    for (FeatureSet set : config.feature_sets) {
        const std::string prefix(feature_set_name(set));
        const auto ratios_rel = fs::path("pca") / (prefix + "_ratios.csv");
        require_upstream(ctx, ratios_rel, "pca");
        const auto text = csv::read_file(ctx.out(ratios_rel).string());
        std::vector<std::vector<std::string>> rows;
        const auto ls = csv::lines(text);
        for (std::size_t i = 1; i < ls.size(); ++i) {
            auto fields = csv::split_line(ls[i]);
            double v = 0.0;
            if (fields.size() == 2 && csv::parse_double(fields[1], v)) fields[1] = fixed(v);
            rows.push_back(std::move(fields));
        }
        md += fmt::format("### {}\n\n", prefix);
        md += md_table({"component", "explained variance ratio"}, rows) + "\n";
        md += fmt::format("![{} PCA](pca/{}_scatter.svg)\n\n", prefix, prefix);
    }

    md += "## Forecast evaluation\n\n";
    require_upstream(ctx, kMetricsPath, "evaluate");
    const auto metrics = read_metric_report(ctx.out(kMetricsPath));
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : metrics)
            rows.push_back({r.target, r.model, std::string(mode_name(r.mode)), fixed(r.avg_rmsse), fixed(r.me),
                            fixed(r.scaled_me), fixed(r.msis), std::to_string(r.excluded_series)});
        md += md_table({"target", "model", "mode", "AvgRMSSE", "ME", "scaled ME", "MSIS", "excluded"}, rows) + "\n";
    }

    md += "## Relations\n\n";
    for (Mode mode : relate_modes(config, metrics)) {
        require_upstream(ctx, relations_path(mode), "relate");
        const auto text = csv::read_file(ctx.out(relations_path(mode)).string());
        const auto ls = csv::lines(text);
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> plots;
        for (std::size_t i = 1; i < ls.size(); ++i) {
            auto f = csv::split_line(ls[i]);
            const auto plot = fmt::format("relate/plots/{}_{}_{}.svg", f[1], f[2], f[3]);
            if (std::find(plots.begin(), plots.end(), plot) == plots.end()) plots.push_back(plot);
            double slope = 0, p = 0;
            csv::parse_double(f[4], slope);
            csv::parse_double(f[6], p);
            rows.push_back({f[0], f[1], f[2], fixed(slope), fixed(p), f[7], f[8]});
        }
        md += fmt::format("### {}\n\n", mode_name(mode));
        md += md_table({"target", "characteristic", "metric", "slope", "p", "n", "flags"}, rows) + "\n";
        for (const auto& p : plots) md += fmt::format("- [{}]({})\n", p.substr(p.rfind('/') + 1), p);
        md += "\n";
    }

    csv::write_file(ctx.out("report.md").string(), md);
    ctx.wrote("report.md");
    ctx.finish_log("report");
    return ctx.result;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"features", "similarity", "diversity", "pca",
                                                "evaluate", "relate",     "report",    "all"};
    return names;
}

CommandResult run_command(std::string_view name, const RunConfig& config) {
    if (name == "features") return cmd_features(config);
    if (name == "similarity") return cmd_similarity(config);
    if (name == "diversity") return cmd_diversity(config);
    if (name == "pca") return cmd_pca(config);
    if (name == "evaluate") return cmd_evaluate(config);
    if (name == "relate") return cmd_relate(config);
    if (name == "report") return cmd_report(config);
    if (name == "all") {
        CommandResult total;
        for (const auto& step : command_names()) {
            if (step == "all") continue;
            auto r = run_command(step, config);
            total.files.insert(total.files.end(), r.files.begin(), r.files.end());
            total.warnings.insert(total.warnings.end(), r.warnings.begin(), r.warnings.end());
        }
        return total;
    }
    throw Error(Errc::InvalidArgument, fmt::format("unknown command '{}'", name));
}

}  // namespace tsxfer
