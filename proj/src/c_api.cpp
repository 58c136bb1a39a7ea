#include "tsxfer/tsxfer.h"

#include <memory>
#include <string>

#include "tsxfer/pipeline.hpp"
#include "tsxfer/stats.hpp"

struct tsx_config {
    tsxfer::RunConfig config;
    tsxfer::CommandResult last;
};

struct tsx_dataset {
    tsxfer::Dataset dataset;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_code;

tsx_status fail(tsx_status status, std::string code, std::string message) {
    g_code = std::move(code);
    g_error = std::move(message);
    return status;
}

template <class F>
tsx_status guarded(F&& f) {
    g_error.clear();
    g_code.clear();
    try {
        f();
        return TSX_OK;
    } catch (const tsxfer::Error& e) {
        return fail(static_cast<tsx_status>(tsxfer::error_class(e.code())), std::string(tsxfer::errc_name(e.code())),
                    e.what());
    } catch (const std::exception& e) {
        return fail(TSX_ERR_INTERNAL, "Internal", e.what());
    } catch (...) {
        return fail(TSX_ERR_INTERNAL, "Internal", "unknown exception");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw tsxfer::Error(tsxfer::Errc::InvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* tsx_version(void) { return "0.1.0"; }
const char* tsx_last_error(void) { return g_error.c_str(); }
const char* tsx_last_error_code(void) { return g_code.c_str(); }

tsx_status tsx_config_load(const char* path, tsx_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto cfg = std::make_unique<tsx_config>();
        cfg->config = tsxfer::load_config(path);
        *out = cfg.release();
    });
}

void tsx_config_free(tsx_config* config) { delete config; }

tsx_status tsx_config_set_output(tsx_config* config, const char* dir) {
    return guarded([&] {
        require(config, "config");
        require(dir, "dir");
        config->config.output_dir = dir;
    });
}

tsx_status tsx_config_set_seed(tsx_config* config, uint64_t seed) {
    return guarded([&] {
        require(config, "config");
        config->config.seed = seed;
    });
}

tsx_status tsx_config_set_features(tsx_config* config, const char* sets) {
    return guarded([&] {
        require(config, "config");
        require(sets, "sets");
        config->config.feature_sets = tsxfer::parse_feature_sets(sets);
    });
}

tsx_status tsx_config_set_mode(tsx_config* config, const char* mode) {
    return guarded([&] {
        require(config, "config");
        require(mode, "mode");
        config->config.modes = {tsxfer::parse_mode(mode)};
    });
}

tsx_status tsx_config_set_source_filter(tsx_config* config, const char* include, const char* exclude) {
    return guarded([&] {
        require(config, "config");
        if (include) config->config.sources.include = tsxfer::split_list(include);
        if (exclude) config->config.sources.exclude = tsxfer::split_list(exclude);
    });
}

tsx_status tsx_run(tsx_config* config, const char* command) {
    return guarded([&] {
        require(config, "config");
        require(command, "command");
        config->last = {};
        config->last = tsxfer::run_command(command, config->config);
    });
}

size_t tsx_warning_count(const tsx_config* config) { return config ? config->last.warnings.size() : 0; }

const char* tsx_warning(const tsx_config* config, size_t index) {
    if (!config || index >= config->last.warnings.size()) return nullptr;
    return config->last.warnings[index].c_str();
}

size_t tsx_output_count(const tsx_config* config) { return config ? config->last.files.size() : 0; }

const char* tsx_output(const tsx_config* config, size_t index) {
    if (!config || index >= config->last.files.size()) return nullptr;
    return config->last.files[index].c_str();
}

tsx_status tsx_write_fixtures(const char* dir, uint64_t seed) {
    return guarded([&] {
        require(dir, "dir");
        tsxfer::write_fixtures(dir, seed);
    });
}

tsx_status tsx_dataset_load(const char* path, const char* role, tsx_dataset** out) {
    return guarded([&] {
        require(path, "path");
        require(role, "role");
        require(out, "out");
        *out = nullptr;
        auto d = std::make_unique<tsx_dataset>();
        d->dataset = tsxfer::load_dataset(path, tsxfer::parse_role(role));
        *out = d.release();
    });
}

void tsx_dataset_free(tsx_dataset* dataset) { delete dataset; }

size_t tsx_dataset_series_count(const tsx_dataset* dataset) { return dataset ? dataset->dataset.series.size() : 0; }

size_t tsx_dataset_series_length(const tsx_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->dataset.series.size()) return 0;
    return dataset->dataset.series[index].length();
}

const double* tsx_dataset_series_values(const tsx_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->dataset.series.size()) return nullptr;
    return dataset->dataset.series[index].values.data();
}

size_t tsx_feature_count(const char* set) {
    if (!set) return 0;
    try {
        return tsxfer::feature_names(tsxfer::parse_feature_set(set)).size();
    } catch (...) {
        return 0;
    }
}

const char* tsx_feature_name(const char* set, size_t index) {
    if (!set) return nullptr;
    try {
        const auto& names = tsxfer::feature_names(tsxfer::parse_feature_set(set));
        return index < names.size() ? names[index].c_str() : nullptr;
    } catch (...) {
        return nullptr;
    }
}

tsx_status tsx_features(const double* values, size_t n, const char* set, double* out, size_t capacity) {
    return guarded([&] {
        require(values, "values");
        require(set, "set");
        require(out, "out");
        const auto fv = tsxfer::extract_features({values, n}, tsxfer::parse_feature_set(set));
        if (capacity < fv.values.size())
            throw tsxfer::Error(tsxfer::Errc::InvalidArgument,
                                "capacity " + std::to_string(capacity) + " < " + std::to_string(fv.values.size()));
        std::copy(fv.values.begin(), fv.values.end(), out);
    });
}

tsx_status tsx_dtw_distance(const double* a, size_t na, const double* b, size_t nb, double* out) {
    return guarded([&] {
        require(out, "out");
        if ((na && !a) || (nb && !b)) throw tsxfer::Error(tsxfer::Errc::InvalidArgument, "null sequence");
        *out = tsxfer::dtw_distance({a, na}, {b, nb});
    });
}

tsx_status tsx_ols_fit(const double* x, const double* y, size_t n, tsx_ols_result* out) {
    return guarded([&] {
        require(x, "x");
        require(y, "y");
        require(out, "out");
        const auto fit = tsxfer::ols_fit({x, n}, {y, n});
        *out = {fit.slope, fit.intercept, fit.p_value, fit.exact_fit ? 1 : 0};
    });
}

tsx_status tsx_plan_origins(size_t train_len, size_t test_len, size_t horizon, size_t* count) {
    return guarded([&] {
        require(count, "count");
        *count = tsxfer::plan_origins(train_len, test_len, horizon).count();
    });
}

tsx_status tsx_naive_rmse_past(const double* y, size_t n, size_t t_r, double* out) {
    return guarded([&] {
        require(y, "y");
        require(out, "out");
        *out = tsxfer::naive_rmse_past({y, n}, t_r);
    });
}

}  // extern "C"
