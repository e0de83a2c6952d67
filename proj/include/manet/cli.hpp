#pragma once

// Command-line front end. The subcommands live in the library so that tests
// can drive them in-process; tools/manet.cpp only forwards argv.

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "manet/config_file.hpp"

namespace manet::cli {

enum ExitCode : int { Success = 0, VerifyFailure = 1, InputError = 2, NumericFailure = 3 };

/// One CSV line. Every column is present; absent fields stay empty.
struct CsvRow
{
    std::vector<std::string> params{};
    std::string quantity{};
    std::string value{};
    std::string method{};
    std::string std_error{};
    std::string diverged{};
    std::string seed{};
    std::string window_radius{};
};

/// `param...,quantity,value,method,stderr,diverged,seed,window_radius`
std::string csv_header(const std::vector<std::string>& param_names);
std::string csv_line(const CsvRow& row);

/// %.7g, or INF for +inf.
std::string format_value(double v);
std::string format_value(const ExtendedReal& v);

struct Axis
{
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int steps = 0;
    bool log_spacing = false;

    std::vector<double> values() const;
};

struct SweepSpec
{
    KeyValues base; ///< configuration keys without the swept ones
    std::vector<Axis> axes;
    std::set<std::string> outputs;
};

/// Reads a sweep file: base configuration keys plus
/// `axisN.name|min|max|steps|spacing` (N = 1, 2) and `outputs = a, b, ...`.
SweepSpec parse_sweep(std::istream& in);

/// Configuration at one grid point.
ScenarioConfig sweep_point(const SweepSpec& spec, const std::vector<double>& coords);

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace manet::cli
