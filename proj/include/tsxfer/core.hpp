#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsxfer/error.hpp"

namespace tsxfer {

enum class Role { Source, Target };

std::string_view role_name(Role role) noexcept;
Role parse_role(std::string_view text);

/// One univariate series. Values are in temporal order; the integer position
/// is the only time information kept.
struct TimeSeries {
    std::string id;
    std::vector<double> values;

    std::size_t length() const noexcept { return values.size(); }
};

struct Dataset {
    std::string name;
    std::vector<TimeSeries> series;
    Role role = Role::Source;

    const TimeSeries* find(std::string_view id) const noexcept;
};

/// Validates the TimeSeries/Dataset invariants (length >= 2, finite values,
/// unique ids, non-empty). Throws Error on violation.
void validate(const Dataset& dataset);

struct SplitSpec {
    double ratio = 0.8;
    std::size_t min_test = 15;
};

struct OriginPlan {
    /// History lengths T_r, strictly increasing.
    std::vector<std::size_t> origins;
    std::size_t horizon = 15;

    std::size_t count() const noexcept { return origins.size(); }
};

/// Reads the long CSV layout `series_id,index,value`. The dataset name is the
/// file stem unless `name` is given.
Dataset load_dataset(const std::filesystem::path& path, Role role,
                     std::optional<std::string> name = std::nullopt);

/// Same parser over in-memory text; `origin` is used in error messages.
Dataset parse_dataset(std::string_view csv_text, std::string name, Role role,
                      std::string_view origin = "<memory>");

/// Per-series split position: floor(ratio * length), moved earlier when
/// the remainder would be shorter than min_test.
std::size_t split_point(std::size_t length, const SplitSpec& spec);

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, const SplitSpec& spec);

/// Draws at most k series without replacement. Ids are ordered
/// lexicographically before drawing, so the result does not depend on the
/// input order; the returned series are in id order.
Dataset sample_series(const Dataset& dataset, std::size_t k, std::uint64_t seed);

OriginPlan plan_origins(std::size_t train_len, std::size_t test_len, std::size_t horizon);

}  // namespace tsxfer
