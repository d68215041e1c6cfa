#pragma once

#include "json.hpp"

#include <ostream>
#include <string>

namespace stochlp {

inline constexpr const char* kVersion = "0.1.0";

// Compact JSON with every floating value printed to 17 significant digits
// (non-finite values become null).
std::string format_report(const nlohmann::json& j);

// Exit codes: 0 success, 1 input error, 2 budget abort, 3 internal invariant.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace stochlp
