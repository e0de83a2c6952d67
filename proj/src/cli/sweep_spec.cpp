#include <charconv>
#include <cmath>
#include <sstream>

#include "manet/cli.hpp"

namespace manet::cli {

namespace {

const std::set<std::string> kOutputs{"analytic_delay", "simulated_delay", "phase_verdict", "ccdf", "shannon_delay"};

double number(const std::string& key, const std::string& text, std::vector<std::string>& problems)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        problems.push_back("key '" + key + "': '" + text + "' is not a number");
    return v;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return {};
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

} // namespace

std::vector<double> Axis::values() const
{
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        v.push_back(log_spacing ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                                : min + t * (max - min));
    }
    return v;
}

SweepSpec parse_sweep(std::istream& in)
{
    SweepSpec spec;
    KeyValues kv = parse_key_values(in);
    std::vector<std::string> problems;

    for (int n = 1; n <= 3; ++n) {
        const std::string prefix = "axis" + std::to_string(n) + ".";
        if (!kv.count(prefix + "name"))
            continue;
        if (n == 3) {
            problems.push_back("at most two sweep axes are supported");
            break;
        }
        Axis a;
        a.name = kv[prefix + "name"];
        if (!is_numeric_key(a.name))
            problems.push_back("axis '" + a.name + "' is not a numeric configuration key");
        for (const char* field : {"min", "max", "steps"}) {
            if (!kv.count(prefix + field))
                problems.push_back("missing key '" + prefix + field + "'");
        }
        if (kv.count(prefix + "min"))
            a.min = number(prefix + "min", kv[prefix + "min"], problems);
        if (kv.count(prefix + "max"))
            a.max = number(prefix + "max", kv[prefix + "max"], problems);
        if (kv.count(prefix + "steps")) {
            const double steps = number(prefix + "steps", kv[prefix + "steps"], problems);
            if (steps != std::floor(steps) || steps < 2.0 || steps > 100000.0)
                problems.push_back("key '" + prefix + "steps' must be an integer >= 2");
            a.steps = static_cast<int>(steps);
        }
        const std::string spacing = kv.count(prefix + "spacing") ? kv[prefix + "spacing"] : "linear";
        if (spacing != "linear" && spacing != "log")
            problems.push_back("key '" + prefix + "spacing' must be linear or log");
        a.log_spacing = spacing == "log";
        if (a.log_spacing && !(a.min > 0.0 && a.max > 0.0))
            problems.push_back("log spacing needs positive bounds on axis '" + a.name + "'");
        spec.axes.push_back(a);
    }
    if (spec.axes.empty())
        problems.push_back("a sweep needs at least one axis (axis1.name, axis1.min, axis1.max, axis1.steps)");
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
        problems.push_back("the two sweep axes must differ");

    if (!kv.count("outputs")) {
        spec.outputs = {"phase_verdict", "analytic_delay"};
    } else {
        std::stringstream ss(kv["outputs"]);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!kOutputs.count(item))
                problems.push_back("unknown output '" + item + "'");
            spec.outputs.insert(item);
        }
    }

    for (const auto& [k, v] : kv) {
        if (k.rfind("axis", 0) == 0 || k == "outputs")
            continue;
        bool swept = false;
        for (const Axis& a : spec.axes)
            swept = swept || a.name == k;
        if (!swept)
            spec.base.emplace(k, v);
    }
    if (!problems.empty())
        throw ConfigError(std::move(problems));

    // Surface configuration errors before any work is done.
    std::vector<double> first;
    for (const Axis& a : spec.axes)
        first.push_back(a.min);
    sweep_point(spec, first);
    return spec;
}

ScenarioConfig sweep_point(const SweepSpec& spec, const std::vector<double>& coords)
{
    KeyValues kv = spec.base;
    for (std::size_t i = 0; i < spec.axes.size(); ++i)
        kv[spec.axes[i].name] = format_number(coords.at(i));
    return build_config(kv);
}

} // namespace manet::cli
