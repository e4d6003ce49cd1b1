#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsol {

enum class Command { Generate, Verify, Wedge, Classify, Dirichlet, Flow, Probe };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitIo = 4;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

/// Parameter keys accepted by a command, besides `seed` and `out`.
const std::vector<std::string>& allowed_keys(Command c);

struct ExperimentConfig {
  Command command = Command::Generate;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
};

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
/// Throws UsageError on a line without '=' or with an empty key.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Merges file and flag parameters (flags win), pulls out `seed` and `out`, and
/// rejects keys the command does not know. Throws UsageError.
ExperimentConfig make_config(Command command, const std::map<std::string, std::string>& file,
                             const std::map<std::string, std::string>& flags);

/// Runs the command, writing artifacts under output_dir and report lines to `report`.
/// Returns kExitOk, kExitCheckFailed, kExitUsage or kExitIo.
int run(const ExperimentConfig& config, std::ostream& report, std::ostream& errors);

}  // namespace tsol
