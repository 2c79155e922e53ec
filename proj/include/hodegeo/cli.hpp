#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hodegeo {

/// Command-line front end. Exit codes: 0 success, 1 usage, 2 parse/model
/// error, 3 dimension/order mismatch, 4 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hodegeo
