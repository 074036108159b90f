#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace su11::cli {

inline constexpr const char* kToolName = "su11-bounds";
inline constexpr const char* kToolVersion = "1.0.0";

enum class Subcommand { kMoments, kBound, kSweepBeta, kSweepEta, kSurface, kCritical, kOracleCheck };

std::string to_string(Subcommand sub);
std::optional<Subcommand> subcommand_from_string(const std::string& name);

/// Subcommand plus a flat key → value map. Keys are the long flag names
/// without the leading dashes, e.g. "eta-a".
struct RunConfig {
  Subcommand subcommand = Subcommand::kBound;
  std::map<std::string, std::string> parameters;
};

enum ExitCode : int { kOk = 0, kDomainError = 2, kOracleFailure = 3 };

/// Keys accepted by a subcommand.
std::vector<std::string> allowed_keys(Subcommand sub);

/// Executes the subcommand. Tables go to the "out" path if given, otherwise
/// to `out`; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main(int argc, char** argv);

}  // namespace su11::cli
