#include "manet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace manet {

std::string to_string(TimeScale t)
{
    return t == TimeScale::Fast ? "fast" : "slow";
}

std::string receiver_name(const ReceiverModel& rx)
{
    struct Visitor
    {
        std::string operator()(const BipolarReceiver&) const { return "bipolar"; }
        std::string operator()(const IpnrReceiver&) const { return "ipnr"; }
        std::string operator()(const MnnReceiver&) const { return "mnn"; }
        std::string operator()(const PoissonPlusGridReceiver&) const { return "poisson_plus_grid"; }
    };
    return std::visit(Visitor{}, rx);
}

namespace {

struct Checker
{
    std::vector<Issue> issues;

    void positive(double v, const char* field)
    {
        if (!(v > 0.0) || !std::isfinite(v))
            violation(field, std::string(field) + " must be a finite positive number");
    }
    void violation(std::string field, std::string msg)
    {
        issues.push_back({Issue::Severity::Violation, std::move(field), std::move(msg)});
    }
    void warning(std::string field, std::string msg)
    {
        issues.push_back({Issue::Severity::Warning, std::move(field), std::move(msg)});
    }
};

} // namespace

std::vector<Issue> validate(const ScenarioConfig& cfg)
{
    Checker c;
    c.positive(cfg.lambda, "lambda");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0))
        c.violation("p", "p must lie in [0, 1]");
    c.positive(cfg.T, "T");

    c.positive(cfg.pathloss.scale(), "pathloss.A");
    if (!(cfg.pathloss.beta() > 2.0) || !std::isfinite(cfg.pathloss.beta()))
        c.violation("pathloss.beta", "β must exceed 2");
    if (cfg.pathloss.kind() == PathLoss::Kind::Truncated)
        c.positive(cfg.pathloss.u0(), "pathloss.u0");

    switch (cfg.fading.kind()) {
    case Fading::Kind::Rayleigh:
    case Fading::Kind::Deterministic:
        c.positive(cfg.fading.mu(), "fading.mu");
        break;
    case Fading::Kind::Weibull:
        c.positive(cfg.fading.shape(), "fading.k");
        c.positive(cfg.fading.scale(), "fading.c");
        break;
    case Fading::Kind::LogNormal:
        if (!std::isfinite(cfg.fading.log_mean()))
            c.violation("fading.m", "fading.m must be finite");
        c.positive(cfg.fading.log_std(), "fading.sigma");
        break;
    }

    switch (cfg.noise.kind()) {
    case Noise::Kind::Constant:
        if (!(cfg.noise.level() >= 0.0) || !std::isfinite(cfg.noise.level()))
            c.violation("noise.w", "noise.w must be finite and >= 0");
        break;
    case Noise::Kind::Exponential:
        c.positive(cfg.noise.rate(), "noise.nu");
        break;
    case Noise::Kind::Zero:
    case Noise::Kind::Custom:
        break;
    }

    if (const auto* b = std::get_if<BipolarReceiver>(&cfg.receiver)) {
        c.positive(b->r, "receiver.r");
    } else if (const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver)) {
        c.positive(ipnr->lambda0, "receiver.lambda0");
    } else if (const auto* grid = std::get_if<PoissonPlusGridReceiver>(&cfg.receiver)) {
        c.positive(grid->lambda0, "receiver.lambda0");
        c.positive(grid->kappa, "receiver.kappa");
    }

    const bool shared_receivers = !std::holds_alternative<BipolarReceiver>(cfg.receiver);
    if (shared_receivers && cfg.T <= 1.0) {
        c.warning("T", "T <= 1 does not exclude multiple receptions by a given receiver; "
                       "the slot engine scores each link's SINR independently");
    }
    return c.issues;
}

bool is_valid(const std::vector<Issue>& issues)
{
    return std::none_of(issues.begin(), issues.end(),
                        [](const Issue& i) { return i.severity == Issue::Severity::Violation; });
}

} // namespace manet
