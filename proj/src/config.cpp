#include "tsxfer/config.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <variant>

#include <fmt/format.h>

#include "csv.hpp"

namespace tsxfer {

namespace {

using Value = std::variant<std::string, double, bool, std::vector<std::string>>;

struct Table {
    std::size_t line = 0;
    std::map<std::string, std::pair<Value, std::size_t>> entries;  // key -> (value, line)
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw Error(Errc::ConfigInvalid, fmt::format("line {}: {}", line, msg));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::string parse_string(std::string_view s, std::size_t line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail(line, fmt::format("expected a string, got {}", s));
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] == '\\' && i + 2 < s.size()) {
            const char c = s[++i];
            out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
        } else {
            out += s[i];
        }
    }
    return out;
}

Value parse_value(std::string_view s, std::size_t line) {
    s = trim(s);
    if (s.empty()) fail(line, "missing value");
    if (s.front() == '"') return parse_string(s, line);
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated array");
        std::vector<std::string> items;
        for (const auto& item : csv::split_line(s.substr(1, s.size() - 2))) {
            const auto t = trim(item);
            if (t.empty()) continue;
            items.push_back(std::string(t));
        }
        return items;
    }
    double v = 0.0;
    if (!csv::parse_double(s, v)) fail(line, fmt::format("cannot parse value '{}'", s));
    return v;
}

std::string as_string(const Value& v, const std::string& key, std::size_t line) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    fail(line, fmt::format("'{}' must be a string", key));
}

double as_number(const Value& v, const std::string& key, std::size_t line) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    fail(line, fmt::format("'{}' must be a number", key));
}

std::size_t as_count(const Value& v, const std::string& key, std::size_t line) {
    const double d = as_number(v, key, line);
    if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d)))
        fail(line, fmt::format("'{}' must be a non-negative integer", key));
    return static_cast<std::size_t>(d);
}

std::vector<std::string> as_list(const Value& v, const std::string& key, std::size_t line) {
    if (const auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
    if (const auto* s = std::get_if<std::string>(&v)) return split_list(*s);
    fail(line, fmt::format("'{}' must be a list or a comma-separated string", key));
}

template <class F>
auto wrap(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(line, e.what());
    }
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& item : csv::split_line(text)) {
        auto t = trim(item);
        if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::vector<FeatureSet> parse_feature_sets(std::string_view text) {
    if (text == "both") return {FeatureSet::Basic10, FeatureSet::Catch24};
    return {parse_feature_set(text)};
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    Table top;
    std::vector<Table> datasets, forecasts;
    Table* current = &top;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(strip_comment(text.substr(pos, end - pos)));
        ++line_no;
        pos = end + 1;
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line == "[[dataset]]" || line == "[[forecast]]") {
            auto& list = line == "[[dataset]]" ? datasets : forecasts;
            list.push_back(Table{line_no, {}});
            current = &list.back();
        } else if (line.front() == '[') {
            fail(line_no, fmt::format("unknown section {}", line));
        } else {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            if (key.empty()) fail(line_no, "empty key");
            if (!current->entries.emplace(key, std::pair{parse_value(line.substr(eq + 1), line_no), line_no}).second)
                fail(line_no, fmt::format("'{}' given twice", key));
        }
        if (end == text.size()) break;
    }

    RunConfig cfg;
    cfg.output_dir = base_dir / cfg.output_dir;
    for (const auto& [key, entry] : top.entries) {
        const auto& [v, ln] = entry;
        if (key == "horizon") cfg.horizon = as_count(v, key, ln);
        else if (key == "split_ratio") cfg.split_ratio = as_number(v, key, ln);
        else if (key == "min_test") cfg.min_test = as_count(v, key, ln);
        else if (key == "sample_k") cfg.sample_k = as_count(v, key, ln);
        else if (key == "seed") cfg.seed = as_count(v, key, ln);
        else if (key == "alpha") cfg.alpha = as_number(v, key, ln);
        else if (key == "features") {
            cfg.feature_sets.clear();
            for (const auto& s : as_list(v, key, ln)) {
                const auto sets = wrap(ln, [&] { return parse_feature_sets(s); });
                for (auto set : sets)
                    if (std::find(cfg.feature_sets.begin(), cfg.feature_sets.end(), set) == cfg.feature_sets.end())
                        cfg.feature_sets.push_back(set);
            }
        } else if (key == "output_dir") {
            cfg.output_dir = base_dir / as_string(v, key, ln);
        } else if (key == "dba_max_iter") cfg.dba_max_iter = as_count(v, key, ln);
        else if (key == "dba_tol") cfg.dba_tol = as_number(v, key, ln);
        else if (key == "dba_scaling") cfg.dba_scaling = wrap(ln, [&] { return parse_dba_scaling(as_string(v, key, ln)); });
        else if (key == "modes") {
            for (const auto& s : as_list(v, key, ln)) cfg.modes.push_back(wrap(ln, [&] { return parse_mode(s); }));
        } else if (key == "include_sources") cfg.sources.include = as_list(v, key, ln);
        else if (key == "exclude_sources") cfg.sources.exclude = as_list(v, key, ln);
        else fail(ln, fmt::format("unknown key '{}'", key));
    }

    auto required = [](const Table& t, const std::string& key, const char* section) -> const std::pair<Value, std::size_t>& {
        auto it = t.entries.find(key);
        if (it == t.entries.end()) fail(t.line, fmt::format("[[{}]] lacks '{}'", section, key));
        return it->second;
    };
    for (const auto& t : datasets) {
        DatasetEntry d;
        for (const auto& [key, entry] : t.entries)
            if (key != "name" && key != "path" && key != "role")
                fail(entry.second, fmt::format("unknown dataset key '{}'", key));
        const auto& [path, pl] = required(t, "path", "dataset");
        d.path = base_dir / as_string(path, "path", pl);
        const auto& [role, rl] = required(t, "role", "dataset");
        d.role = wrap(rl, [&] { return parse_role(as_string(role, "role", rl)); });
        if (auto it = t.entries.find("name"); it != t.entries.end())
            d.name = as_string(it->second.first, "name", it->second.second);
        else
            d.name = d.path.stem().string();
        cfg.datasets.push_back(std::move(d));
    }
    for (const auto& t : forecasts) {
        ForecastEntry f;
        for (const auto& [key, entry] : t.entries)
            if (key != "model" && key != "mode" && key != "target" && key != "path")
                fail(entry.second, fmt::format("unknown forecast key '{}'", key));
        const auto& [model, ml] = required(t, "model", "forecast");
        f.model = as_string(model, "model", ml);
        const auto& [mode, mdl] = required(t, "mode", "forecast");
        f.mode = wrap(mdl, [&] { return parse_mode(as_string(mode, "mode", mdl)); });
        const auto& [target, tl] = required(t, "target", "forecast");
        f.target = as_string(target, "target", tl);
        const auto& [path, pl] = required(t, "path", "forecast");
        f.path = base_dir / as_string(path, "path", pl);
        cfg.forecasts.push_back(std::move(f));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = csv::read_file(path.string());
    } catch (const Error& e) {
        throw Error(Errc::ConfigInvalid, e.what());
    }
    try {
        return parse_config(text, path.parent_path());
    } catch (const Error& e) {
        throw Error(Errc::ConfigInvalid, fmt::format("{}: {}", path.string(), e.what()));
    }
}

void validate_config(const RunConfig& c) {
    auto bad = [](const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); };
    if (c.horizon < 1) bad("horizon must be >= 1");
    if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) bad(fmt::format("split_ratio {} not in (0,1)", c.split_ratio));
    if (c.min_test && *c.min_test < 1) bad("min_test must be >= 1");
    if (c.sample_k < 1) bad("sample_k must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad(fmt::format("alpha {} not in (0,1)", c.alpha));
    if (c.feature_sets.empty()) bad("no feature set selected");
    if (c.dba_max_iter < 1) bad("dba_max_iter must be >= 1");
    std::size_t sources = 0, targets = 0;
    std::set<std::string> names;
    for (const auto& d : c.datasets) {
        (d.role == Role::Source ? sources : targets) += 1;
        if (!names.insert(d.name).second) bad(fmt::format("dataset name '{}' used twice", d.name));
        if (!std::filesystem::is_regular_file(d.path))
            bad(fmt::format("dataset '{}': file '{}' not found", d.name, d.path.string()));
    }
    if (sources == 0 || targets == 0) bad("need at least one source and one target dataset");
    for (const auto& f : c.forecasts) {
        const auto it = std::find_if(c.datasets.begin(), c.datasets.end(),
                                     [&](const DatasetEntry& d) { return d.name == f.target; });
        if (it == c.datasets.end() || it->role != Role::Target)
            bad(fmt::format("forecast '{}': '{}' is not a target dataset", f.model, f.target));
        if (!std::filesystem::is_regular_file(f.path))
            bad(fmt::format("forecast '{}' for '{}': file '{}' not found", f.model, f.target, f.path.string()));
    }
}

}  // namespace tsxfer
