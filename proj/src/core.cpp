#include "tsxfer/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "csv.hpp"
#include "tsxfer/rng.hpp"

namespace tsxfer {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::MissingColumn: return "MissingColumn";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::DuplicateIndex: return "DuplicateIndex";
        case Errc::EmptyFile: return "EmptyFile";
        case Errc::SeriesTooShort: return "SeriesTooShort";
        case Errc::HorizonExceedsTest: return "HorizonExceedsTest";
        case Errc::FeatureSetMismatch: return "FeatureSetMismatch";
        case Errc::NotStandardized: return "NotStandardized";
        case Errc::MissingForecast: return "MissingForecast";
        case Errc::MissingQuantile: return "MissingQuantile";
        case Errc::InsufficientPoints: return "InsufficientPoints";
        case Errc::NoOverlap: return "NoOverlap";
        case Errc::UpstreamMissing: return "UpstreamMissing";
        case Errc::IoFailure: return "IoFailure";
        case Errc::ZeroVarianceDataset: return "ZeroVarianceDataset";
        case Errc::SingleSource: return "SingleSource";
        case Errc::TooFewFeatures: return "TooFewFeatures";
        case Errc::DegenerateX: return "DegenerateX";
        case Errc::EmptyInput: return "EmptyInput";
    }
    return "Unknown";
}

ErrorClass error_class(Errc code) noexcept {
    switch (code) {
        case Errc::ConfigInvalid:
        case Errc::InvalidArgument:
            return ErrorClass::Usage;
        case Errc::ZeroVarianceDataset:
        case Errc::SingleSource:
        case Errc::TooFewFeatures:
        case Errc::DegenerateX:
        case Errc::EmptyInput:
            return ErrorClass::Numeric;
        default:
            return ErrorClass::Data;
    }
}

std::string_view role_name(Role role) noexcept {
    return role == Role::Source ? "source" : "target";
}

Role parse_role(std::string_view text) {
    if (text == "source") return Role::Source;
    if (text == "target") return Role::Target;
    throw Error(Errc::InvalidArgument, fmt::format("unknown role '{}'", text));
}

const TimeSeries* Dataset::find(std::string_view id) const noexcept {
    for (const auto& s : series)
        if (s.id == id) return &s;
    return nullptr;
}

void validate(const Dataset& dataset) {
    if (dataset.series.empty())
        throw Error(Errc::EmptyFile, fmt::format("dataset '{}' has no series", dataset.name));
    std::set<std::string_view> seen;
    for (const auto& s : dataset.series) {
        if (!seen.insert(s.id).second)
            throw Error(Errc::DuplicateIndex,
                        fmt::format("series id '{}' repeated in dataset '{}'", s.id, dataset.name));
        if (s.length() < 2)
            throw Error(Errc::SeriesTooShort,
                        fmt::format("series '{}' has {} observations, need at least 2", s.id,
                                    s.length()));
        for (std::size_t i = 0; i < s.length(); ++i)
            if (!std::isfinite(s.values[i]))
                throw Error(Errc::NonFiniteValue,
                            fmt::format("series '{}' index {} is not finite", s.id, i));
    }
}

Dataset parse_dataset(std::string_view csv_text, std::string name, Role role,
                      std::string_view origin) {
    // Keep the raw line numbers so NonFiniteValue can name the row.
    std::vector<std::pair<std::size_t, std::string_view>> rows;
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= csv_text.size()) {
            auto end = csv_text.find('\n', pos);
            if (end == std::string_view::npos) end = csv_text.size();
            auto line = csv_text.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            ++line_no;
            if (!line.empty() && line.find_first_not_of(" \t") != std::string_view::npos &&
                line.front() != '#')
                rows.emplace_back(line_no, line);
            if (end == csv_text.size()) break;
            pos = end + 1;
        }
    }
    if (rows.empty()) throw Error(Errc::EmptyFile, fmt::format("{}: no content", origin));

    auto header = csv::split_line(rows.front().second);
    int col_id = -1, col_index = -1, col_value = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "series_id") col_id = static_cast<int>(c);
        else if (header[c] == "index") col_index = static_cast<int>(c);
        else if (header[c] == "value") col_value = static_cast<int>(c);
    }
    for (auto [col, label] : {std::pair{col_id, "series_id"}, std::pair{col_index, "index"},
                              std::pair{col_value, "value"}})
        if (col < 0)
            throw Error(Errc::MissingColumn, fmt::format("{}: header lacks '{}'", origin, label));
    if (rows.size() == 1) throw Error(Errc::EmptyFile, fmt::format("{}: header only", origin));

    // series id -> (index -> value); std::map keeps index order.
    std::map<std::string, std::map<std::size_t, double>> grouped;
    std::vector<std::string> first_seen;
    const auto width = static_cast<std::size_t>(std::max({col_id, col_index, col_value})) + 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto [line_no, line] = rows[r];
        auto fields = csv::split_line(line);
        if (fields.size() < width)
            throw Error(Errc::MissingColumn,
                        fmt::format("{}:{}: expected at least {} fields", origin, line_no, width));
        const auto& id = fields[static_cast<std::size_t>(col_id)];
        std::size_t index = 0;
        if (!csv::parse_size(fields[static_cast<std::size_t>(col_index)], index))
            throw Error(Errc::InvalidArgument,
                        fmt::format("{}:{}: index '{}' is not a non-negative integer", origin,
                                    line_no, fields[static_cast<std::size_t>(col_index)]));
        double value = 0.0;
        if (!csv::parse_double(fields[static_cast<std::size_t>(col_value)], value) ||
            !std::isfinite(value))
            throw Error(Errc::NonFiniteValue,
                        fmt::format("{}:{}: value '{}' is not a finite number", origin, line_no,
                                    fields[static_cast<std::size_t>(col_value)]));
        auto [it, fresh] = grouped.try_emplace(id);
        if (fresh) first_seen.push_back(id);
        if (!it->second.emplace(index, value).second)
            throw Error(Errc::DuplicateIndex,
                        fmt::format("{}:{}: series '{}' repeats index {}", origin, line_no, id,
                                    index));
    }

    Dataset dataset;
    dataset.name = std::move(name);
    dataset.role = role;
    dataset.series.reserve(first_seen.size());
    for (const auto& id : first_seen) {
        TimeSeries s;
        s.id = id;
        for (const auto& [idx, v] : grouped[id]) s.values.push_back(v);
        dataset.series.push_back(std::move(s));
    }
    validate(dataset);
    return dataset;
}

Dataset load_dataset(const std::filesystem::path& path, Role role, std::optional<std::string> name) {
    const auto text = csv::read_file(path.string());
    return parse_dataset(text, name ? *name : path.stem().string(), role, path.string());
}

std::size_t split_point(std::size_t length, const SplitSpec& spec) {
    if (!(spec.ratio > 0.0 && spec.ratio < 1.0))
        throw Error(Errc::InvalidArgument, fmt::format("split ratio {} not in (0,1)", spec.ratio));
    if (spec.min_test == 0) throw Error(Errc::InvalidArgument, "min_test must be positive");
    if (length < spec.min_test + 2)
        throw Error(Errc::SeriesTooShort,
                    fmt::format("length {} < min_test {} + 2", length, spec.min_test));
    auto train = static_cast<std::size_t>(std::floor(spec.ratio * static_cast<double>(length)));
    if (length - train < spec.min_test) train = length - spec.min_test;
    return train;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, const SplitSpec& spec) {
    Dataset train{dataset.name, {}, dataset.role};
    Dataset test{dataset.name, {}, dataset.role};
    train.series.reserve(dataset.series.size());
    test.series.reserve(dataset.series.size());
    for (const auto& s : dataset.series) {
        std::size_t cut = 0;
        try {
            cut = split_point(s.length(), spec);
        } catch (const Error& e) {
            if (e.code() == Errc::SeriesTooShort)
                throw Error(Errc::SeriesTooShort,
                            fmt::format("series '{}' in '{}': length {} < min_test {} + 2", s.id,
                                        dataset.name, s.length(), spec.min_test));
            throw;
        }
        auto mid = s.values.begin() + static_cast<std::ptrdiff_t>(cut);
        train.series.push_back({s.id, {s.values.begin(), mid}});
        test.series.push_back({s.id, {mid, s.values.end()}});
    }
    return {std::move(train), std::move(test)};
}

Dataset sample_series(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw Error(Errc::InvalidArgument, "sample size k must be >= 1");
    std::vector<std::size_t> order(dataset.series.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dataset.series[a].id < dataset.series[b].id;
    });
    if (order.size() > k) {
        // Partial Fisher-Yates over the id-sorted positions.
        Rng rng(seed);
        for (std::size_t i = 0; i < k; ++i) {
            auto j = i + static_cast<std::size_t>(rng.below(order.size() - i));
            std::swap(order[i], order[j]);
        }
        order.resize(k);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return dataset.series[a].id < dataset.series[b].id;
        });
    }
    Dataset out{dataset.name, {}, dataset.role};
    out.series.reserve(order.size());
    for (auto i : order) out.series.push_back(dataset.series[i]);
    return out;
}

OriginPlan plan_origins(std::size_t train_len, std::size_t test_len, std::size_t horizon) {
    if (horizon == 0) throw Error(Errc::InvalidArgument, "horizon must be positive");
    if (test_len < horizon)
        throw Error(Errc::HorizonExceedsTest,
                    fmt::format("test length {} shorter than horizon {}", test_len, horizon));
    if (train_len < 2)
        throw Error(Errc::SeriesTooShort, fmt::format("train length {} < 2", train_len));
    OriginPlan plan;
    plan.horizon = horizon;
    const auto count = test_len - horizon + 1;
    plan.origins.reserve(count);
    for (std::size_t r = 0; r < count; ++r) plan.origins.push_back(train_len + r);
    return plan;
}

}  // namespace tsxfer
