#include "tsxfer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "tsxfer/stats.hpp"

namespace tsxfer {

namespace {

constexpr double kLevelTol = 1e-9;

/// Series indices of the actuals in id order, the fixed reduction order.
std::vector<std::size_t> id_order(const Dataset& d) {
    std::vector<std::size_t> order(d.series.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d.series[a].id < d.series[b].id; });
    return order;
}

const std::vector<double>& require_level(const ForecastSet& f, const QuantilePath& path,
                                         const std::string& id, std::size_t r, double level,
                                         std::size_t h, Errc code) {
    const auto* row = path.level(level);
    if (row == nullptr)
        throw Error(code, fmt::format("{}/{}: series '{}' origin {} lacks level {}", f.model_name,
                                      f.target, id, r, level));
    if (row->size() < h)
        throw Error(Errc::MissingForecast,
                    fmt::format("{}/{}: series '{}' origin {} has {} steps, need {}", f.model_name,
                                f.target, id, r, row->size(), h));
    return *row;
}

const QuantilePath& require_path(const ForecastSet& f, const std::string& id, std::size_t r) {
    const auto* path = f.find(id, r);
    if (path == nullptr)
        throw Error(Errc::MissingForecast,
                    fmt::format("{}/{}: no forecast for series '{}' origin {}", f.model_name, f.target, id, r));
    return *path;
}

void check_plan(const Dataset& actuals, const EvaluationPlan& plan) {
    if (plan.size() != actuals.series.size())
        throw Error(Errc::InvalidArgument,
                    fmt::format("{} origin plans for {} series", plan.size(), actuals.series.size()));
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& p = plan[i];
        if (!p.origins.empty() && p.origins.back() + p.horizon > actuals.series[i].length())
            throw Error(Errc::HorizonExceedsTest,
                        fmt::format("series '{}': origin {} + h {} exceeds length {}", actuals.series[i].id,
                                    p.origins.back(), p.horizon, actuals.series[i].length()));
    }
}

/// Term of one (series, origin); nullopt when the scale vanished.
template <class Term>
MetricValue scaled_average(const Dataset& actuals, const EvaluationPlan& plan, Term term, bool scaled) {
    check_plan(actuals, plan);
    const auto order = id_order(actuals);
    std::size_t max_r = 0;
    for (const auto& p : plan) max_r = std::max(max_r, p.count());

    std::set<std::size_t> excluded;
    double outer = 0.0;
    std::size_t used_origins = 0;
    for (std::size_t r = 1; r <= max_r; ++r) {
        double inner = 0.0;
        std::size_t used = 0;
        for (auto i : order) {
            const auto& p = plan[i];
            if (r > p.count()) continue;
            const auto& y = actuals.series[i].values;
            const std::size_t t_r = p.origins[r - 1];
            const double value = term(i, r, t_r, p.horizon);
            if (scaled) {
                const double denom = naive_rmse_past(y, t_r);
                if (denom == 0.0) {
                    excluded.insert(i);
                    continue;
                }
                inner += value / denom;
            } else {
                inner += value;
            }
            ++used;
        }
        if (used == 0) continue;
        outer += inner / static_cast<double>(used);
        ++used_origins;
    }
    if (used_origins == 0)
        throw Error(Errc::EmptyInput, fmt::format("'{}': no (series, origin) pair could be scored", actuals.name));
    return {outer / static_cast<double>(used_origins), excluded.size()};
}

}  // namespace

std::string_view mode_name(Mode mode) noexcept {
    switch (mode) {
        case Mode::ZeroShot: return "zero_shot";
        case Mode::FineTuned: return "fine_tuned";
        case Mode::Scratch: return "scratch";
        case Mode::Benchmark: return "benchmark";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text) {
    for (Mode m : {Mode::ZeroShot, Mode::FineTuned, Mode::Scratch, Mode::Benchmark})
        if (text == mode_name(m)) return m;
    throw Error(Errc::InvalidArgument, fmt::format("unknown mode '{}'", text));
}

const std::vector<double>* QuantilePath::level(double q) const noexcept {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (std::fabs(levels[i] - q) <= kLevelTol) return &values[i];
    return nullptr;
}

std::size_t normalize_quantile_path(QuantilePath& path) {
    if (path.levels.size() != path.values.size())
        throw Error(Errc::InvalidArgument, "quantile levels and rows differ in count");
    std::vector<std::size_t> order(path.levels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return path.levels[a] < path.levels[b]; });
    QuantilePath sorted;
    for (auto i : order) {
        if (!(path.levels[i] > 0.0 && path.levels[i] < 1.0))
            throw Error(Errc::InvalidArgument, fmt::format("quantile level {} not in (0,1)", path.levels[i]));
        sorted.levels.push_back(path.levels[i]);
        sorted.values.push_back(std::move(path.values[i]));
    }
    const std::size_t h = sorted.horizon();
    for (const auto& row : sorted.values)
        if (row.size() != h) throw Error(Errc::InvalidArgument, "quantile rows differ in length");

    std::size_t repaired = 0;
    std::vector<double> column(sorted.levels.size());
    for (std::size_t t = 0; t < h; ++t) {
        for (std::size_t l = 0; l < column.size(); ++l) column[l] = sorted.values[l][t];
        if (std::is_sorted(column.begin(), column.end())) continue;
        std::sort(column.begin(), column.end());
        for (std::size_t l = 0; l < column.size(); ++l) sorted.values[l][t] = column[l];
        ++repaired;
    }
    path = std::move(sorted);
    return repaired;
}

const QuantilePath* ForecastSet::find(const std::string& series_id, std::size_t origin) const {
    auto it = entries.find({series_id, origin});
    return it == entries.end() ? nullptr : &it->second;
}

double naive_rmse_past(std::span<const double> y, std::size_t t_r) {
    if (t_r < 2 || t_r > y.size())
        throw Error(Errc::InvalidArgument, fmt::format("T_r = {} outside [2, {}]", t_r, y.size()));
    double ss = 0.0;
    for (std::size_t t = 1; t < t_r; ++t) ss += (y[t] - y[t - 1]) * (y[t] - y[t - 1]);
    return std::sqrt(ss / static_cast<double>(t_r - 1));
}

EvaluationPlan evaluation_plan(const Dataset& actuals, const SplitSpec& split, std::size_t horizon) {
    EvaluationPlan plan;
    plan.reserve(actuals.series.size());
    for (const auto& s : actuals.series) {
        const std::size_t train = split_point(s.length(), split);
        try {
            plan.push_back(plan_origins(train, s.length() - train, horizon));
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("series '{}' in '{}': {}", s.id, actuals.name, e.what()));
        }
    }
    return plan;
}

EvaluationPlan uniform_plan(const Dataset& actuals, const OriginPlan& plan) {
    return EvaluationPlan(actuals.series.size(), plan);
}

MetricValue avg_rmsse(const Dataset& actuals, const ForecastSet& f, const EvaluationPlan& plan) {
    auto term = [&](std::size_t i, std::size_t r, std::size_t t_r, std::size_t h) {
        const auto& s = actuals.series[i];
        const auto& med = require_level(f, require_path(f, s.id, r), s.id, r, 0.5, h, Errc::MissingForecast);
        double ss = 0.0;
        for (std::size_t t = 0; t < h; ++t) ss += (s.values[t_r + t] - med[t]) * (s.values[t_r + t] - med[t]);
        return std::sqrt(ss / static_cast<double>(h));
    };
    return scaled_average(actuals, plan, term, true);
}

double avg_me(const Dataset& actuals, const ForecastSet& f, const EvaluationPlan& plan) {
    auto term = [&](std::size_t i, std::size_t r, std::size_t t_r, std::size_t h) {
        const auto& s = actuals.series[i];
        const auto& med = require_level(f, require_path(f, s.id, r), s.id, r, 0.5, h, Errc::MissingForecast);
        double acc = 0.0;
        for (std::size_t t = 0; t < h; ++t) acc += s.values[t_r + t] - med[t];
        return acc / static_cast<double>(h);
    };
    return scaled_average(actuals, plan, term, false).value;
}

MetricValue msis(const Dataset& actuals, const ForecastSet& f, const EvaluationPlan& plan, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(Errc::InvalidArgument, fmt::format("alpha {} not in (0,1)", alpha));
    auto term = [&](std::size_t i, std::size_t r, std::size_t t_r, std::size_t h) {
        const auto& s = actuals.series[i];
        const auto& path = require_path(f, s.id, r);
        const auto& lo = require_level(f, path, s.id, r, alpha / 2, h, Errc::MissingQuantile);
        const auto& hi = require_level(f, path, s.id, r, 1 - alpha / 2, h, Errc::MissingQuantile);
        double acc = 0.0;
        for (std::size_t t = 0; t < h; ++t) {
            const double y = s.values[t_r + t];
            acc += hi[t] - lo[t];
            if (y < lo[t]) acc += (2.0 / alpha) * (lo[t] - y);
            if (y > hi[t]) acc += (2.0 / alpha) * (y - hi[t]);
        }
        return acc / static_cast<double>(h);
    };
    return scaled_average(actuals, plan, term, true);
}

ScaledValues scale_me(std::span<const double> mes) {
    if (mes.size() < 2) throw Error(Errc::InsufficientPoints, "scaling needs at least 2 values");
    ScaledValues out{{mes.begin(), mes.end()}, false};
    const double sd = std::sqrt(sample_variance(mes));
    if (!(sd > 0.0)) {
        out.zero_spread = true;
        return out;
    }
    for (auto& v : out.values) v /= sd;
    return out;
}

std::vector<MetricRow> metric_report(const std::vector<std::pair<const Dataset*, const ForecastSet*>>& runs,
                                     const SplitSpec& split, std::size_t horizon,
                                     std::vector<std::string>& warnings) {
    std::vector<MetricRow> rows;
    for (const auto& [actuals, f] : runs) {
        const auto plan = evaluation_plan(*actuals, split, horizon);
        MetricRow row;
        row.model = f->model_name;
        row.mode = f->mode;
        row.target = f->target;
        const auto acc = avg_rmsse(*actuals, *f, plan);
        const auto interval = msis(*actuals, *f, plan);
        row.avg_rmsse = acc.value;
        row.msis = interval.value;
        row.me = avg_me(*actuals, *f, plan);
        row.excluded_series = std::max(acc.excluded_series, interval.excluded_series);
        if (row.excluded_series > 0)
            warnings.push_back(fmt::format("{}/{}/{}: {} series with zero naive RMSE excluded", row.model,
                                           mode_name(row.mode), row.target, row.excluded_series));
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
        return std::tie(a.target, a.model, a.mode) < std::tie(b.target, b.model, b.mode);
    });

    for (std::size_t b = 0; b < rows.size();) {
        std::size_t e = b;
        while (e < rows.size() && rows[e].target == rows[b].target) ++e;
        std::vector<double> mes;
        for (std::size_t i = b; i < e; ++i) mes.push_back(rows[i].me);
        if (mes.size() < 2) {
            rows[b].scaled_me = rows[b].me;
            warnings.push_back(fmt::format("{}: single metric row, scaled ME left unscaled", rows[b].target));
        } else {
            const auto scaled = scale_me(mes);
            if (scaled.zero_spread)
                warnings.push_back(fmt::format("ZeroSpread: all MEs of target '{}' are equal", rows[b].target));
            for (std::size_t i = b; i < e; ++i) rows[i].scaled_me = scaled.values[i - b];
        }
        b = e;
    }
    return rows;
}

}  // namespace tsxfer
