#pragma once

#include <string>
#include <vector>

namespace shapelab {

// lo:hi:geom:n or lo:hi:lin:n
std::vector<double> parse_range(const std::string& text);

// exit codes: 0 success, 1 validation/usage error, 2 solver failure
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace shapelab
