#include <cmath>
#include <cstdio>

#include "manet/cli.hpp"

namespace manet::cli {

std::string csv_header(const std::vector<std::string>& param_names)
{
    std::string h;
    for (const auto& p : param_names)
        h += p + ",";
    return h + "quantity,value,method,stderr,diverged,seed,window_radius";
}

std::string csv_line(const CsvRow& row)
{
    std::string line;
    for (const auto& p : row.params)
        line += p + ",";
    line += row.quantity + "," + row.value + "," + row.method + "," + row.std_error + "," + row.diverged + "," +
            row.seed + "," + row.window_radius;
    return line;
}

std::string format_value(double v)
{
    if (std::isinf(v) && v > 0.0)
        return "INF";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

std::string format_value(const ExtendedReal& v)
{
    return v.is_infinite() ? "INF" : format_value(v.value());
}

} // namespace manet::cli
