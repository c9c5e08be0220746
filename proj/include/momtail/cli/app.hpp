#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "momtail/errors.hpp"
#include "momtail/serialize.hpp"

namespace momtail::cli {

using momtail::to_json;

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kPrecisionError = 3,
  kConstructionError = 4,
  kVerifyMismatch = 5,
  kIoError = 6,
  kSizeBound = 7,
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kToolName = "momtail";
inline constexpr const char* kToolVersion = "1.0.0";

struct Config {
  std::size_t precision_bits = std::size_t{1} << 26;
  unsigned long ell_search_cap = 5000;
  unsigned long alternating_search_cap = 20000;
  unsigned long eventual_positive_cap = 10000;
  unsigned long compare_depth = 200;
  std::size_t game_size_bound = 6;
  std::size_t fip_bound = 64;

  PrecisionBudget budget() const { return {precision_bits}; }
};

/// Unknown keys are rejected so that typos do not silently fall back to defaults.
Config config_from_json(const Json& j);
Json to_json(const Config& c);

/// What a command produced, before it is wrapped into an artifact.
struct Result {
  std::string kind;
  Json payload;
  Json verification;
  /// Optional side outputs (CSV, plot data); not part of the artifact.
  std::string csv;
  std::string plot;
};

/// Runs one command. `command` holds {"name": ..., plus its parameters}; every
/// input (measures, games, sets) is embedded so that the command can be
/// replayed from the artifact alone.
Result execute(const Json& command, const Config& config);

/// {"tool", "version", "command", "kind", "config", "payload", "verification"}
Json make_artifact(const Json& command, const Config& config, const Result& result);

struct VerifyOutcome {
  bool matches = false;
  std::string detail;
  std::optional<std::string> version_note;
};

/// Replays the recorded command and compares every recorded value exactly.
VerifyOutcome verify_artifact(const Json& artifact);

/// Canonical serialization used for artifacts and comparisons.
std::string dump(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string content_hash(const std::string& text);

/// Maps a library exception to an exit code and a one-line JSON diagnostic.
int exit_code_for(const std::exception& e);
std::string diagnostic(const std::exception& e);

}  // namespace momtail::cli
