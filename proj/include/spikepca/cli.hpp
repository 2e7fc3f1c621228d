#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spikepca {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point of the spikepca command line; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

/// Shortest round-trip decimal form of v.
std::string shortest(double v);

}  // namespace spikepca
