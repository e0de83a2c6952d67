#include "manet/config_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <set>

namespace manet {

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        if (!out.empty())
            out += "; ";
        out += s;
    }
    return out;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

const std::set<std::string>& numeric_keys()
{
    static const std::set<std::string> keys{
        "lambda",      "p",        "T",        "pathloss.A",       "pathloss.beta",
        "pathloss.u0", "fading.mu", "fading.k", "fading.c",        "fading.m",
        "fading.sigma", "noise.w", "noise.nu", "receiver.r",      "receiver.lambda0",
        "receiver.kappa"};
    return keys;
}

const std::set<std::string>& choice_keys()
{
    static const std::set<std::string> keys{"pathloss.variant", "fading.variant",   "noise.variant",
                                            "receiver.variant", "variability.fading", "variability.noise",
                                            "interference",     "mobility"};
    return keys;
}

/// Consumes keys from the map and records problems.
class Reader
{
  public:
    Reader(const KeyValues& kv, const std::vector<std::string>& ignored) : kv_(kv)
    {
        for (const auto& [k, v] : kv) {
            bool skip = false;
            for (const auto& prefix : ignored)
                skip = skip || k.rfind(prefix, 0) == 0;
            if (skip)
                used_.insert(k);
        }
    }

    double number(const std::string& key, std::optional<double> fallback)
    {
        const auto it = kv_.find(key);
        if (it == kv_.end()) {
            if (!fallback)
                problems.push_back("missing required key '" + key + "'");
            return fallback.value_or(0.0);
        }
        used_.insert(key);
        const std::string& text = it->second;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            problems.push_back("key '" + key + "': '" + text + "' is not a number");
            return fallback.value_or(0.0);
        }
        return v;
    }

    std::string choice(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed)
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            return fallback;
        used_.insert(key);
        if (!allowed.count(it->second)) {
            std::string opts;
            for (const auto& a : allowed)
                opts += (opts.empty() ? "" : "|") + a;
            problems.push_back("key '" + key + "': '" + it->second + "' is not one of " + opts);
            return fallback;
        }
        return it->second;
    }

    void finish()
    {
        for (const auto& [k, v] : kv_) {
            if (used_.count(k))
                continue;
            if (numeric_keys().count(k) || choice_keys().count(k))
                problems.push_back("key '" + k + "' does not apply to the selected variants");
            else
                problems.push_back("unknown key '" + k + "'");
        }
    }

    std::vector<std::string> problems;

  private:
    const KeyValues& kv_;
    std::set<std::string> used_;
};

TimeScale time_scale(const std::string& s)
{
    return s == "slow" ? TimeScale::Slow : TimeScale::Fast;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)), problems_(std::move(problems))
{
}

KeyValues parse_key_values(std::istream& in)
{
    KeyValues kv;
    std::vector<std::string> problems;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || value.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (kv.count(key)) {
            problems.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }
        kv.emplace(std::move(key), std::move(value));
    }
    if (!problems.empty())
        throw ConfigError(std::move(problems));
    return kv;
}

ScenarioConfig build_config(const KeyValues& kv, const std::vector<std::string>& ignored_prefixes)
{
    Reader rd(kv, ignored_prefixes);
    ScenarioConfig cfg;
    cfg.lambda = rd.number("lambda", std::nullopt);
    cfg.p = rd.number("p", std::nullopt);
    cfg.T = rd.number("T", std::nullopt);

    const std::string pl = rd.choice("pathloss.variant", "power_law", {"power_law", "max_one", "shifted", "truncated"});
    const double A = rd.number("pathloss.A", 1.0);
    const double beta = rd.number("pathloss.beta", 4.0);
    if (pl == "power_law")
        cfg.pathloss = PathLoss::power_law(A, beta);
    else if (pl == "max_one")
        cfg.pathloss = PathLoss::max_one(A, beta);
    else if (pl == "shifted")
        cfg.pathloss = PathLoss::shifted(A, beta);
    else
        cfg.pathloss = PathLoss::truncated(A, beta, rd.number("pathloss.u0", std::nullopt));

    const std::string fd = rd.choice("fading.variant", "rayleigh", {"rayleigh", "deterministic", "weibull", "lognormal"});
    if (fd == "rayleigh")
        cfg.fading = Fading::rayleigh(rd.number("fading.mu", 1.0));
    else if (fd == "deterministic")
        cfg.fading = Fading::deterministic(rd.number("fading.mu", 1.0));
    else if (fd == "weibull")
        cfg.fading = Fading::weibull(rd.number("fading.k", std::nullopt), rd.number("fading.c", std::nullopt));
    else
        cfg.fading = Fading::lognormal(rd.number("fading.m", std::nullopt), rd.number("fading.sigma", std::nullopt));

    const std::string nz = rd.choice("noise.variant", "zero", {"zero", "constant", "exponential"});
    if (nz == "constant")
        cfg.noise = Noise::constant(rd.number("noise.w", std::nullopt));
    else if (nz == "exponential")
        cfg.noise = Noise::exponential(rd.number("noise.nu", std::nullopt));
    else
        cfg.noise = Noise::zero();

    const std::string rx = rd.choice("receiver.variant", "", {"bipolar", "ipnr", "mnn", "poisson_plus_grid"});
    if (rx == "bipolar")
        cfg.receiver = BipolarReceiver{rd.number("receiver.r", std::nullopt)};
    else if (rx == "ipnr")
        cfg.receiver = IpnrReceiver{rd.number("receiver.lambda0", std::nullopt)};
    else if (rx == "mnn")
        cfg.receiver = MnnReceiver{};
    else if (rx == "poisson_plus_grid")
        cfg.receiver = PoissonPlusGridReceiver{rd.number("receiver.lambda0", std::nullopt),
                                               rd.number("receiver.kappa", std::nullopt)};
    else
        rd.problems.push_back("missing required key 'receiver.variant'");

    cfg.variability.fading = time_scale(rd.choice("variability.fading", "fast", {"fast", "slow"}));
    cfg.variability.noise = time_scale(rd.choice("variability.noise", "fast", {"fast", "slow"}));
    cfg.interference = rd.choice("interference", "present", {"present", "cancelled"}) == "cancelled"
                           ? InterferenceMode::Cancelled
                           : InterferenceMode::Present;
    cfg.mobility = rd.choice("mobility", "static", {"static", "resampled"}) == "resampled" ? Mobility::Resampled
                                                                                         : Mobility::Static;
    rd.finish();
    if (!rd.problems.empty())
        throw ConfigError(std::move(rd.problems));
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file '" + path.string() + "'"});
    return build_config(parse_key_values(in));
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

KeyValues to_key_values(const ScenarioConfig& cfg)
{
    KeyValues kv;
    kv["lambda"] = format_number(cfg.lambda);
    kv["p"] = format_number(cfg.p);
    kv["T"] = format_number(cfg.T);

    kv["pathloss.variant"] = to_string(cfg.pathloss.kind());
    kv["pathloss.A"] = format_number(cfg.pathloss.scale());
    kv["pathloss.beta"] = format_number(cfg.pathloss.beta());
    if (cfg.pathloss.kind() == PathLoss::Kind::Truncated)
        kv["pathloss.u0"] = format_number(cfg.pathloss.u0());

    kv["fading.variant"] = to_string(cfg.fading.kind());
    switch (cfg.fading.kind()) {
    case Fading::Kind::Rayleigh:
    case Fading::Kind::Deterministic:
        kv["fading.mu"] = format_number(cfg.fading.mu());
        break;
    case Fading::Kind::Weibull:
        kv["fading.k"] = format_number(cfg.fading.shape());
        kv["fading.c"] = format_number(cfg.fading.scale());
        break;
    case Fading::Kind::LogNormal:
        kv["fading.m"] = format_number(cfg.fading.log_mean());
        kv["fading.sigma"] = format_number(cfg.fading.log_std());
        break;
    }

    kv["noise.variant"] = to_string(cfg.noise.kind());
    if (cfg.noise.kind() == Noise::Kind::Constant)
        kv["noise.w"] = format_number(cfg.noise.level());
    else if (cfg.noise.kind() == Noise::Kind::Exponential)
        kv["noise.nu"] = format_number(cfg.noise.rate());

    kv["receiver.variant"] = receiver_name(cfg.receiver);
    if (const auto* b = std::get_if<BipolarReceiver>(&cfg.receiver)) {
        kv["receiver.r"] = format_number(b->r);
    } else if (const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver)) {
        kv["receiver.lambda0"] = format_number(ipnr->lambda0);
    } else if (const auto* g = std::get_if<PoissonPlusGridReceiver>(&cfg.receiver)) {
        kv["receiver.lambda0"] = format_number(g->lambda0);
        kv["receiver.kappa"] = format_number(g->kappa);
    }

    kv["variability.fading"] = to_string(cfg.variability.fading);
    kv["variability.noise"] = to_string(cfg.variability.noise);
    kv["interference"] = cfg.interference == InterferenceMode::Cancelled ? "cancelled" : "present";
    kv["mobility"] = cfg.mobility == Mobility::Resampled ? "resampled" : "static";
    return kv;
}

bool is_numeric_key(const std::string& key)
{
    return numeric_keys().count(key) > 0;
}

} // namespace manet
