#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tsxfer/config.hpp"

namespace tsxfer {

/// Output of one command: files written (relative to the output directory)
/// and warnings raised along the way.
struct CommandResult {
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

CommandResult cmd_features(const RunConfig& config);
CommandResult cmd_similarity(const RunConfig& config);
CommandResult cmd_diversity(const RunConfig& config);
CommandResult cmd_pca(const RunConfig& config);
CommandResult cmd_evaluate(const RunConfig& config);
CommandResult cmd_relate(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);

/// Dispatches by name; "all" runs features through report in order.
CommandResult run_command(std::string_view name, const RunConfig& config);

const std::vector<std::string>& command_names();

/// Writes a small synthetic study into `dir`: three source and two target
/// datasets, bootstrap forecasts for every (source model, target, mode) and
/// a config.toml referencing them.
std::vector<std::string> write_fixtures(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace tsxfer
