#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cone_spectra::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kNumericalError = 2, kUsage = 64 };

/// Parses an angle: a decimal number or a closed form such as `pi`, `pi/2`,
/// `3pi/4`, `pi-1e-3`. Throws DomainError on malformed input.
double parse_angle(std::string_view token);

/// Expands `geometric:<center>,<eps_min>,<eps_max>,<count>` (center must be
/// pi) or `linear:<a>,<b>,<count>` into ascending angles.
std::vector<double> parse_alpha_spec(std::string_view spec);

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cone_spectra::cli
