#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sf::cli {

// Exit codes: 0 success, 1 verification/bound failure (diagnostics as JSON
// on stdout), 2 usage or parameter error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sf::cli
