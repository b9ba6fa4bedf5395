#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catrisk {

// Parses a gamma argument. Accepted syntaxes:
//   plain decimal / scientific   "2.9512e-06", "5.3"
//   power-of-ten                 "10^-5.53"
//   scientific with fractional exponent  "1e-5.53" (mantissa * 10^exponent)
// Throws std::invalid_argument naming the offending token.
double parse_gamma(const std::string& token);

// Dispatches the full command-line surface. args excludes the program name.
// Returns the process exit code: 0 success, 1 internal failure or failing
// report cells, 2 argument errors, 3 solver gave up, 4 domain errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace catrisk
