#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flmpc/config.hpp"

namespace flmpc {

/// Documented exit codes; every error class maps to exactly one.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int unexpected = 1;
inline constexpr int config = 2;
inline constexpr int dataset = 3;
inline constexpr int insufficient_clients = 4;
inline constexpr int overflow = 5;
inline constexpr int protocol = 6;
inline constexpr int budget = 7;
inline constexpr int privacy_fail = 8;
inline constexpr int reduction_fail = 9;
inline constexpr int transcript = 10;
inline constexpr int usage = 64;
} // namespace exit_code

struct CliOptions {
    std::string command; // run | ideal | check-privacy | check-reduction | report
    std::string config_path;
    std::string data_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode; // det | general
    int workers = 1;
};

/// Dispatches one subcommand; returns the exit code and writes any output
/// files under the out directory. All output is deterministic: identical
/// config and seeds give byte-identical files.
int run_cli(const CliOptions& options);

} // namespace flmpc
