#pragma once

// Command-line front end. Every subcommand returns one of the exit codes
// below; reports are deterministic JSON.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl4/dixon.hpp"
#include "sl4/grpstore.hpp"

namespace sl4::cli {

inline constexpr const char* kToolName = "sl4verify";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kVerified = 0,
  kVerdictFailed = 1,  ///< a mathematical check came out false
  kOperationalError = 2,
};

struct StageResult {
  std::string name;
  std::string claim;
  bool ok = false;
  std::string detail;
  nlohmann::json data;
};

struct VerifyAllOptions {
  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = kDefaultSeed;
  int nmax = 12;
  bool stretch_sl4_mod3 = false;
};

/// Stages in order: identities, theorem at level 2, SL3 counterexample,
/// pipeline at levels 2 and 4, strong-convergence gap. Stops at the first
/// operational error (exception propagates).
std::vector<StageResult> verify_all(const VerifyAllOptions& options);

/// "SL3:2" -> {3, 2}; throws std::invalid_argument.
std::pair<int, int> parse_group_spec(const std::string& text);

/// Parses args (without the program name), runs, and maps exceptions to
/// exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sl4::cli
