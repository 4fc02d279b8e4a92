#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace lambdasurf {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitInvariant = 4;

struct RunContext {
    std::filesystem::path out_dir;
    std::uint64_t seed = 12345;
    bool quiet = false;
};

/// Fills defaults and validates; throws ValidationError with a message.
/// The result is the "resolved config" echoed to stdout and embedded in
/// every report.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& raw);

/// Executes one subcommand pipeline. `config` must already be resolved.
/// Writes report.json plus per-command CSV data into ctx.out_dir.
int run_command(const std::string& command, const nlohmann::json& config, const RunContext& ctx);

/// All subcommand names, in help order.
const std::vector<std::string>& command_names();

}  // namespace lambdasurf
