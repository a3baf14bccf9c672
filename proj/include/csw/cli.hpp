#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csw::cli {

enum Exit { Pass = 0, ClaimFailure = 1, ConfigError = 2, IoError = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csw::cli
