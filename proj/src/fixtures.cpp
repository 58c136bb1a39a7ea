#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "csv.hpp"
#include "tsxfer/io.hpp"
#include "tsxfer/pipeline.hpp"
#include "tsxfer/rng.hpp"

namespace tsxfer {

namespace {

double normal(Rng& rng) {
    // Box-Muller; 1 - unit() keeps the log argument positive.
    const double u1 = 1.0 - rng.unit();
    const double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

enum class Shape { Seasonal, Autoregressive, Intermittent };

struct Spec {
    const char* name;
    Role role;
    Shape shape;
    std::size_t series;
    double noise;
};

constexpr std::size_t kLength = 80;

const Spec kSpecs[] = {
    {"retail", Role::Source, Shape::Seasonal, 30, 1.5},
    {"energy", Role::Source, Shape::Autoregressive, 30, 1.0},
    {"web", Role::Source, Shape::Intermittent, 30, 1.0},
    {"sales", Role::Target, Shape::Seasonal, 20, 2.0},
    {"load", Role::Target, Shape::Autoregressive, 20, 0.7},
};

Dataset synthesize(const Spec& spec, Rng& rng) {
    Dataset d{spec.name, {}, spec.role};
    for (std::size_t s = 0; s < spec.series; ++s) {
        TimeSeries ts{fmt::format("{}_{:03}", spec.name, s), std::vector<double>(kLength)};
        const double level = 20.0 + 10.0 * rng.unit();
        const double phase = 2.0 * std::numbers::pi * rng.unit();
        double ar = 0.0;
        for (std::size_t t = 0; t < kLength; ++t) {
            const double tt = static_cast<double>(t);
            double v = 0.0;
            switch (spec.shape) {
                case Shape::Seasonal:
                    v = level + 5.0 * std::sin(2.0 * std::numbers::pi * tt / 13.0 + phase) + spec.noise * normal(rng);
                    break;
                case Shape::Autoregressive:
                    ar = 0.8 * ar + spec.noise * normal(rng);
                    v = level + 0.05 * tt + ar;
                    break;
                case Shape::Intermittent:
                    v = rng.unit() < 0.35 ? std::max(0.0, 6.0 + 2.0 * spec.noise * normal(rng)) : 0.0;
                    break;
            }
            ts.values[t] = v;
        }
        d.series.push_back(std::move(ts));
    }
    return d;
}

}  // namespace

std::vector<std::string> write_fixtures(const fs::path& dir, std::uint64_t seed) {
    std::vector<std::string> files;
    Rng rng(seed);
    std::vector<Dataset> datasets;
    for (const auto& spec : kSpecs) {
        datasets.push_back(synthesize(spec, rng));
        const auto rel = fs::path("data") / (std::string(spec.name) + ".csv");
        write_dataset(datasets.back(), dir / rel);
        files.push_back(rel.generic_string());
    }

    constexpr std::size_t kHorizon = 15;
    const SplitSpec split{0.8, kHorizon};
    std::string config = fmt::format("# Synthetic study generated with seed {}\n"
                                     "horizon = {}\nsplit_ratio = 0.8\nsample_k = 1000\nseed = {}\n"
                                     "features = \"both\"\noutput_dir = \"out\"\n",
                                     seed, kHorizon, seed);
    for (const auto& spec : kSpecs)
        config += fmt::format("\n[[dataset]]\nname = \"{}\"\npath = \"data/{}.csv\"\nrole = \"{}\"\n", spec.name,
                              spec.name, role_name(spec.role));

    std::uint64_t stream = seed * 1000003ULL + 17;
    std::size_t model_index = 0;
    for (const auto& src : datasets) {
        if (src.role != Role::Source) continue;
        for (const auto& tgt : datasets) {
            if (tgt.role != Role::Target) continue;
            for (Mode mode : {Mode::ZeroShot, Mode::FineTuned}) {
                // Each pretend model carries its own bias and interval width.
                const double shrink = mode == Mode::FineTuned ? 0.5 : 1.0;
                const double bias = (static_cast<double>(model_index) - 1.0) * 0.6 * shrink;
                const double widen = 1.0 + 0.3 * static_cast<double>(model_index) * shrink;
                ForecastSet f{src.name, mode, tgt.name, {}, {}};
                for (const auto& s : tgt.series) {
                    const std::size_t train = split_point(s.length(), split);
                    const auto plan = plan_origins(train, s.length() - train, kHorizon);
                    for (std::size_t r = 1; r <= plan.count(); ++r) {
                        const std::span<const double> hist(s.values.data(), plan.origins[r - 1]);
                        auto qp = naive_bootstrap_forecast(hist, kHorizon, 200, ++stream);
                        double scale = 0.0;
                        for (std::size_t t = 1; t < hist.size(); ++t) scale += std::fabs(hist[t] - hist[t - 1]);
                        scale /= static_cast<double>(hist.size() - 1);
                        const auto mid = qp.values[1];
                        for (std::size_t l = 0; l < qp.levels.size(); ++l)
                            for (std::size_t t = 0; t < kHorizon; ++t) {
                                const double m = mid[t];
                                qp.values[l][t] = m + bias * scale + widen * (qp.values[l][t] - m);
                            }
                        f.entries.emplace(std::pair{s.id, r}, std::move(qp));
                    }
                }
                const auto rel = fs::path("forecasts") /
                                 fmt::format("{}__{}__{}.csv", src.name, tgt.name, mode_name(mode));
                write_forecasts(f, dir / rel);
                files.push_back(rel.generic_string());
                config += fmt::format("\n[[forecast]]\nmodel = \"{}\"\nmode = \"{}\"\ntarget = \"{}\"\npath = \"{}\"\n",
                                      src.name, mode_name(mode), tgt.name, rel.generic_string());
            }
        }
        ++model_index;
    }
    csv::write_file((dir / "config.toml").string(), config);
    files.emplace_back("config.toml");
    return files;
}

}  // namespace tsxfer
