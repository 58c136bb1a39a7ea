#include "tsxfer/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"

namespace tsxfer {

namespace csv {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#' && line.find_first_not_of(" \t") != std::string_view::npos)
            out.push_back(line);
        pos = end + 1;
    }
    return out;
}

std::string quote_if_needed(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

bool parse_double(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_size(std::string_view text, std::size_t& out) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::string format_double(double value) {
    return fmt::format("{}", value);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, fmt::format("cannot open '{}' for reading", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, fmt::format("cannot open '{}' for writing", path));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::IoFailure, fmt::format("write to '{}' failed", path));
}

}  // namespace csv

namespace {

using json = nlohmann::json;

fs::path sidecar(const fs::path& csv_path) {
    auto p = csv_path;
    return p.replace_extension(".json");
}

double field_double(const std::string& text, const fs::path& path, std::size_t line) {
    double v = 0.0;
    if (!csv::parse_double(text, v))
        throw Error(Errc::NonFiniteValue, fmt::format("{}:{}: '{}' is not a number", path.string(), line, text));
    return v;
}

std::size_t field_size(const std::string& text, const fs::path& path, std::size_t line) {
    std::size_t v = 0;
    if (!csv::parse_size(text, v))
        throw Error(Errc::InvalidArgument,
                    fmt::format("{}:{}: '{}' is not a non-negative integer", path.string(), line, text));
    return v;
}

/// Non-comment lines split into fields; the first one must be `header`
/// (when given) and the rest must have as many fields as the header.
std::vector<std::vector<std::string>> read_table(const fs::path& path, const std::vector<std::string>& header) {
    const auto text = csv::read_file(path.string());
    const auto ls = csv::lines(text);
    if (ls.empty()) throw Error(Errc::EmptyFile, fmt::format("{}: no content", path.string()));
    std::vector<std::vector<std::string>> rows;
    for (auto l : ls) rows.push_back(csv::split_line(l));
    if (!header.empty())
        for (const auto& name : header)
            if (std::find(rows.front().begin(), rows.front().end(), name) == rows.front().end())
                throw Error(Errc::MissingColumn, fmt::format("{}: header lacks '{}'", path.string(), name));
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != rows.front().size())
            throw Error(Errc::MissingColumn, fmt::format("{}: row {} has {} fields, header has {}", path.string(),
                                                         r + 1, rows[r].size(), rows.front().size()));
    return rows;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv::quote_if_needed(fields[i]);
    }
    out += '\n';
    return out;
}

}  // namespace

void write_feature_matrix(const FeatureMatrix& m, const fs::path& path) {
    std::string out = "series_id";
    for (const auto& n : m.feature_names) out += "," + csv::quote_if_needed(n);
    out += '\n';
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        out += csv::quote_if_needed(m.series_ids[i]);
        for (double v : m.rows[i]) out += "," + csv::format_double(v);
        out += '\n';
    }
    csv::write_file(path.string(), out);

    json side;
    side["dataset"] = m.dataset_name;
    side["role"] = std::string(role_name(m.role));
    side["set_id"] = std::string(feature_set_name(m.set));
    side["standardized"] = m.standardized();
    side["rows"] = m.row_count();
    if (m.standardization) {
        side["mean"] = m.standardization->mean;
        side["sd"] = m.standardization->sd;
    } else {
        side["mean"] = nullptr;
        side["sd"] = nullptr;
    }
    side["warnings"] = m.warnings;
    csv::write_file(sidecar(path).string(), side.dump(2) + "\n");
}

FeatureMatrix read_feature_matrix(const fs::path& path) {
    json side;
    try {
        side = json::parse(csv::read_file(sidecar(path).string()));
    } catch (const json::exception& e) {
        throw Error(Errc::IoFailure, fmt::format("{}: {}", sidecar(path).string(), e.what()));
    }
    const auto rows = read_table(path, {"series_id"});
    FeatureMatrix m;
    try {
        m.dataset_name = side.at("dataset").get<std::string>();
        m.role = parse_role(side.at("role").get<std::string>());
        m.set = parse_feature_set(side.at("set_id").get<std::string>());
        if (side.at("standardized").get<bool>())
            m.standardization = Standardization{side.at("mean").get<std::vector<double>>(),
                                                side.at("sd").get<std::vector<double>>()};
        m.warnings = side.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(Errc::IoFailure, fmt::format("{}: {}", sidecar(path).string(), e.what()));
    }
    m.feature_names.assign(rows.front().begin() + 1, rows.front().end());
    if (m.feature_names != feature_names(m.set))
        throw Error(Errc::FeatureSetMismatch, fmt::format("{}: columns do not match set {}", path.string(),
                                                          feature_set_name(m.set)));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        m.series_ids.push_back(rows[r][0]);
        std::vector<double> row;
        for (std::size_t c = 1; c < rows[r].size(); ++c) row.push_back(field_double(rows[r][c], path, r + 1));
        m.rows.push_back(std::move(row));
    }
    return m;
}

void write_dataset(const Dataset& d, const fs::path& path) {
    std::string out = "series_id,index,value\n";
    for (const auto& s : d.series)
        for (std::size_t i = 0; i < s.length(); ++i)
            out += fmt::format("{},{},{}\n", csv::quote_if_needed(s.id), i, csv::format_double(s.values[i]));
    csv::write_file(path.string(), out);
}

void write_distance_matrix(const DistanceMatrix& m, const fs::path& path) {
    std::string out = fmt::format("# kind={}\n", distance_kind_name(m.kind));
    std::vector<std::string> header{"source"};
    header.insert(header.end(), m.target_names.begin(), m.target_names.end());
    out += join_row(header);
    for (std::size_t n = 0; n < m.source_names.size(); ++n) {
        std::vector<std::string> row{m.source_names[n]};
        for (double v : m.values[n]) row.push_back(csv::format_double(v));
        out += join_row(row);
    }
    csv::write_file(path.string(), out);
}

DistanceMatrix read_distance_matrix(const fs::path& path) {
    const auto text = csv::read_file(path.string());
    const std::string_view prefix = "# kind=";
    if (text.compare(0, prefix.size(), prefix) != 0)
        throw Error(Errc::MissingColumn, fmt::format("{}: missing '# kind=' line", path.string()));
    const auto eol = text.find('\n');
    auto kind = text.substr(prefix.size(), eol - prefix.size());
    if (!kind.empty() && kind.back() == '\r') kind.pop_back();

    DistanceMatrix m;
    m.kind = parse_distance_kind(kind);
    const auto rows = read_table(path, {"source"});
    m.target_names.assign(rows.front().begin() + 1, rows.front().end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        m.source_names.push_back(rows[r][0]);
        std::vector<double> row;
        for (std::size_t c = 1; c < rows[r].size(); ++c) row.push_back(field_double(rows[r][c], path, r + 1));
        m.values.push_back(std::move(row));
    }
    return m;
}

void write_barycenter(const Barycenter& b, const fs::path& path) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < b.values.size(); ++i) out += fmt::format("{},{}\n", i, csv::format_double(b.values[i]));
    csv::write_file(path.string(), out);
    json side;
    side["dataset"] = b.dataset_name;
    side["iterations"] = b.iterations_run;
    side["converged"] = b.converged;
    side["objective"] = b.objective;
    csv::write_file(sidecar(path).string(), side.dump(2) + "\n");
}

void write_diversity(const DiversityTable& t, const fs::path& path) {
    std::string out = "dataset,score\n";
    for (std::size_t i = 0; i < t.datasets.size(); ++i)
        out += join_row({t.datasets[i], csv::format_double(t.scores[i])});
    csv::write_file(path.string(), out);
}

DiversityTable read_diversity(const fs::path& path, FeatureSet set) {
    const auto rows = read_table(path, {"dataset", "score"});
    DiversityTable t;
    t.set = set;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        t.datasets.push_back(rows[r][0]);
        t.scores.push_back(field_double(rows[r][1], path, r + 1));
    }
    return t;
}

void write_pca(const PcaResult& r, const fs::path& dir, const std::string& prefix) {
    std::vector<std::string> header{"component"};
    header.insert(header.end(), r.feature_names.begin(), r.feature_names.end());
    std::string loadings = join_row(header);
    for (std::size_t c = 0; c < 2; ++c) {
        std::vector<std::string> row{fmt::format("pc{}", c + 1)};
        for (double v : r.loadings[c]) row.push_back(csv::format_double(v));
        loadings += join_row(row);
    }
    csv::write_file((dir / (prefix + "_loadings.csv")).string(), loadings);

    std::string ratios = "component,explained_variance_ratio\n";
    for (std::size_t c = 0; c < 2; ++c)
        ratios += fmt::format("pc{},{}\n", c + 1, csv::format_double(r.explained_variance_ratio[c]));
    csv::write_file((dir / (prefix + "_ratios.csv")).string(), ratios);

    std::string proj = "dataset,series_id,pc1,pc2\n";
    for (const auto& p : r.projections)
        proj += join_row({p.dataset, p.series_id, csv::format_double(p.pc1), csv::format_double(p.pc2)});
    csv::write_file((dir / (prefix + "_projections.csv")).string(), proj);
}

void write_metric_report(const std::vector<MetricRow>& rows, const fs::path& path) {
    std::string out = "model,mode,target,avg_rmsse,me,scaled_me,msis,excluded_series\n";
    for (const auto& r : rows)
        out += join_row({r.model, std::string(mode_name(r.mode)), r.target, csv::format_double(r.avg_rmsse),
                         csv::format_double(r.me), csv::format_double(r.scaled_me), csv::format_double(r.msis),
                         std::to_string(r.excluded_series)});
    csv::write_file(path.string(), out);
}

std::vector<MetricRow> read_metric_report(const fs::path& path) {
    const std::vector<std::string> cols{"model", "mode", "target", "avg_rmsse", "me", "scaled_me", "msis",
                                        "excluded_series"};
    const auto rows = read_table(path, cols);
    std::map<std::string, std::size_t> at;
    for (std::size_t c = 0; c < rows.front().size(); ++c) at[rows.front()[c]] = c;
    std::vector<MetricRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        MetricRow m;
        m.model = f[at["model"]];
        m.mode = parse_mode(f[at["mode"]]);
        m.target = f[at["target"]];
        m.avg_rmsse = field_double(f[at["avg_rmsse"]], path, r + 1);
        m.me = field_double(f[at["me"]], path, r + 1);
        m.scaled_me = field_double(f[at["scaled_me"]], path, r + 1);
        m.msis = field_double(f[at["msis"]], path, r + 1);
        m.excluded_series = field_size(f[at["excluded_series"]], path, r + 1);
        out.push_back(std::move(m));
    }
    return out;
}

void write_relations(const std::vector<RelationFit>& fits, const fs::path& path) {
    std::string out = "target,characteristic,metric,mode,slope,intercept,p_value,n,flags\n";
    for (const auto& f : fits)
        out += join_row({f.target, std::string(characteristic_name(f.characteristic)),
                         std::string(metric_kind_name(f.metric)), std::string(mode_name(f.mode)),
                         csv::format_double(f.slope), csv::format_double(f.intercept), csv::format_double(f.p_value),
                         std::to_string(f.n), f.flags});
    csv::write_file(path.string(), out);
}

ForecastSet read_forecasts(const fs::path& path, std::string model, Mode mode, std::string target) {
    const std::vector<std::string> cols{"series_id", "origin", "step", "level", "value"};
    const auto rows = read_table(path, cols);
    std::map<std::string, std::size_t> at;
    for (std::size_t c = 0; c < rows.front().size(); ++c) at[rows.front()[c]] = c;
    if (rows.size() == 1) throw Error(Errc::EmptyFile, fmt::format("{}: header only", path.string()));

    // (series, origin) -> level -> step -> value
    std::map<std::pair<std::string, std::size_t>, std::map<double, std::map<std::size_t, double>>> grouped;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        const std::size_t origin = field_size(f[at["origin"]], path, r + 1);
        const std::size_t step = field_size(f[at["step"]], path, r + 1);
        const double level = field_double(f[at["level"]], path, r + 1);
        const double value = field_double(f[at["value"]], path, r + 1);
        if (origin == 0 || step == 0)
            throw Error(Errc::InvalidArgument, fmt::format("{}:{}: origin and step are 1-based", path.string(), r + 1));
        if (!std::isfinite(value))
            throw Error(Errc::NonFiniteValue, fmt::format("{}:{}: non-finite forecast", path.string(), r + 1));
        auto& slot = grouped[{f[at["series_id"]], origin}][level];
        if (!slot.emplace(step, value).second)
            throw Error(Errc::DuplicateIndex, fmt::format("{}:{}: repeated (series, origin, step, level)",
                                                          path.string(), r + 1));
    }

    ForecastSet set;
    set.model_name = std::move(model);
    set.mode = mode;
    set.target = std::move(target);
    for (auto& [key, levels] : grouped) {
        QuantilePath qp;
        for (auto& [level, steps] : levels) {
            std::vector<double> row;
            std::size_t expect = 1;
            for (auto [step, v] : steps) {
                if (step != expect++)
                    throw Error(Errc::MissingForecast,
                                fmt::format("{}: series '{}' origin {} level {} skips step {}", path.string(),
                                            key.first, key.second, level, expect - 1));
                row.push_back(v);
            }
            qp.levels.push_back(level);
            qp.values.push_back(std::move(row));
        }
        try {
            if (const auto repaired = normalize_quantile_path(qp); repaired > 0)
                set.warnings.push_back(fmt::format("series '{}' origin {}: {} crossing quantile steps sorted",
                                                   key.first, key.second, repaired));
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("{}: series '{}' origin {}: {}", path.string(), key.first,
                                              key.second, e.what()));
        }
        set.entries.emplace(key, std::move(qp));
    }
    return set;
}

void write_forecasts(const ForecastSet& f, const fs::path& path) {
    std::string out = "series_id,origin,step,level,value\n";
    for (const auto& [key, qp] : f.entries)
        for (std::size_t l = 0; l < qp.levels.size(); ++l)
            for (std::size_t t = 0; t < qp.horizon(); ++t)
                out += join_row({key.first, std::to_string(key.second), std::to_string(t + 1),
                                 csv::format_double(qp.levels[l]), csv::format_double(qp.values[l][t])});
    csv::write_file(path.string(), out);
}

}  // namespace tsxfer
