#pragma once

#include <string>
#include <vector>

#include "qwalk/config.hpp"

namespace qwalk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIO = 4;

/// Executes one configured experiment; errors propagate as qwalk::Error.
void run(const ExperimentConfig& cfg);

/// Parses a command line (config file first, then flags) and runs it,
/// mapping failures to exit codes.
int run_cli(int argc, char** argv);

/// "1/8,3/8" -> z values as (num, den) reduced, validated.
std::vector<std::pair<int, int>> parse_fractions(const std::string& list);

}  // namespace qwalk
