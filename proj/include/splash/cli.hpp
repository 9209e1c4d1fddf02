#pragma once

// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 usage or input error, 3 numerical failure.

#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace splash::cli {

enum ExitCode : int { ok = 0, validation_failed = 1, usage_error = 2, numerical_failure = 3 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

/// Axis range "x0:x1:count" along one coordinate.
struct AxisRange {
    double from = 0.0;
    double to = 0.0;
    int count = 1;

    double at(int i) const { return count == 1 ? from : from + (to - from) * double(i) / double(count - 1); }
    double spacing() const { return count == 1 ? 0.0 : std::abs(to - from) / double(count - 1); }
};

struct GridSpec {
    AxisRange x, y;
};

/// Parses "x0:x1:nx,y0:y1:ny"; throws std::invalid_argument when malformed.
GridSpec parse_grid(const std::string& spec);

/// Path of the file holding the last good state after a failed run writing to `out`.
std::string sidecar_path(const std::string& out);

} // namespace splash::cli
