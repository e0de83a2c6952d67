#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "manet/quadrature.hpp"
#include "rules.hpp"

namespace manet::analytic {

namespace detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PhaseVerdict tag(Verdict v, std::string rule, double lhs = kNaN, double rhs = kNaN)
{
    return {v, lhs, rhs, std::move(rule)};
}

/// Finite iff lhs < rhs; equality sits on the pole and counts as infinite.
PhaseVerdict strict(double lhs, double rhs, std::string rule)
{
    return tag(lhs < rhs ? Verdict::Finite : Verdict::Infinite, std::move(rule), lhs, rhs);
}

bool rayleigh_fast(const ScenarioConfig& cfg)
{
    return cfg.fading.kind() == Fading::Kind::Rayleigh && cfg.variability.fading == TimeScale::Fast;
}

bool slow_fading_slow_noise(const ScenarioConfig& cfg)
{
    return cfg.variability.fading == TimeScale::Slow && cfg.variability.noise == TimeScale::Slow &&
           !cfg.noise.is_null();
}

double unbounded_density(const ScenarioConfig& cfg)
{
    if (const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver))
        return ipnr->lambda0;
    if (std::holds_alternative<MnnReceiver>(cfg.receiver))
        return cfg.lambda;
    throw UnsupportedModel("receiver model '" + receiver_name(cfg.receiver) +
                           "' does not have an unbounded nearest-receiver distance");
}

/// Effect of the noise factor D_W(mu T l(r)) under an unbounded receiver
/// distance law with Rayleigh fading. Any growth faster than e^{c r^2}
/// defeats the Gaussian distance density.
enum class NoiseGrowth { Bounded, Explosive, Unknown };

NoiseGrowth noise_growth(const ScenarioConfig& cfg, std::string& rule)
{
    switch (cfg.noise.kind()) {
    case Noise::Kind::Zero:
        return NoiseGrowth::Bounded;
    case Noise::Kind::Constant:
        if (cfg.noise.level() == 0.0)
            return NoiseGrowth::Bounded;
        rule = "constant_noise_unbounded_distance";
        return NoiseGrowth::Explosive;
    case Noise::Kind::Exponential:
        if (cfg.variability.noise == TimeScale::Fast)
            return NoiseGrowth::Bounded;
        rule = "slow_noise_unbounded_distance";
        return NoiseGrowth::Explosive;
    case Noise::Kind::Custom:
        return NoiseGrowth::Unknown;
    }
    return NoiseGrowth::Unknown;
}

std::optional<PhaseVerdict> unbounded_preamble(const ScenarioConfig& cfg)
{
    if (cfg.p == 0.0)
        return tag(Verdict::Infinite, "no_transmission");
    if (slow_fading_slow_noise(cfg))
        return tag(Verdict::Infinite, "slow_fading_slow_noise");
    if (!rayleigh_fast(cfg))
        throw UnsupportedModel("no analytic rule for " + to_string(cfg.fading.kind()) + " " +
                               to_string(cfg.variability.fading) + " fading with this receiver model");
    return std::nullopt;
}

/// P{W T l(r) > F} for frozen fading and noise.
double slow_outage(const ScenarioConfig& cfg, double r)
{
    const double c = cfg.T * cfg.pathloss(r);
    const Fading& f = cfg.fading;
    switch (cfg.noise.kind()) {
    case Noise::Kind::Zero:
        return 0.0;
    case Noise::Kind::Constant:
        return 1.0 - f.tail(cfg.noise.level() * c);
    case Noise::Kind::Exponential: {
        const double nu = cfg.noise.rate();
        if (f.kind() == Fading::Kind::Rayleigh)
            return f.mu() * c / (nu + f.mu() * c);
        const auto g = [&](double w) { return nu * std::exp(-nu * w) * (1.0 - f.tail(c * w)); };
        const quad::Result res = quad::integrate_to_infinity(g, 0.0, 1.0 / nu);
        if (!res.converged)
            throw NumericError("outage probability quadrature did not converge");
        return res.value;
    }
    case Noise::Kind::Custom:
        if (f.kind() == Fading::Kind::Rayleigh)
            return 1.0 - cfg.noise.laplace(f.mu() * c);
        throw UnsupportedModel("outage probability with custom noise needs Rayleigh fading");
    }
    return 0.0;
}

} // namespace

void require_valid(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    bool bad = false;
    for (const Issue& i : validate(cfg)) {
        if (i.severity != Issue::Severity::Violation)
            continue;
        os << (bad ? "; " : "") << i.message;
        bad = true;
    }
    if (bad)
        throw DomainError("invalid scenario: " + os.str());
}

double log_noise_success(const ScenarioConfig& cfg, double r)
{
    return cfg.fading.log_tail(cfg.pathloss(r) * cfg.noise.level() * cfg.T);
}

std::optional<PhaseVerdict> bipolar_rule(const ScenarioConfig& cfg)
{
    require_valid(cfg);
    const auto* b = std::get_if<BipolarReceiver>(&cfg.receiver);
    if (!b)
        throw UnsupportedModel("bipolar rule applied to receiver model '" + receiver_name(cfg.receiver) + "'");
    if (cfg.p == 0.0)
        return tag(Verdict::Infinite, "no_transmission");
    const double c = cfg.T * cfg.pathloss(b->r);

    if (cfg.variability.fading == TimeScale::Slow) {
        if (cfg.variability.noise == TimeScale::Slow) {
            const double outage = slow_outage(cfg, b->r);
            if (outage > 0.0)
                return tag(Verdict::Infinite, "bipolar_slow_fading_slow_noise", outage, 0.0);
        }
        throw UnsupportedModel("no analytic rule for slow fading unless the frozen noise causes outage");
    }

    if (cfg.fading.kind() != Fading::Kind::Rayleigh) {
        if (cfg.interference == InterferenceMode::Cancelled && cfg.noise.kind() != Noise::Kind::Exponential &&
            cfg.noise.kind() != Noise::Kind::Custom) {
            const double success = std::exp(log_noise_success(cfg, b->r));
            return tag(success > 0.0 ? Verdict::Finite : Verdict::Infinite, "bipolar_noise_limited_tail", success,
                       0.0);
        }
        throw UnsupportedModel("bipolar links with " + to_string(cfg.fading.kind()) +
                               " fading need cancelled interference and constant noise");
    }

    if (cfg.interference == InterferenceMode::Present && cfg.mobility == Mobility::Static && cfg.p == 1.0 &&
        cfg.pathloss.has_pole())
        return tag(Verdict::Infinite, "full_access_pole");

    const double s = cfg.fading.mu() * c;
    if (cfg.variability.noise == TimeScale::Slow) {
        if (cfg.noise.kind() == Noise::Kind::Exponential)
            return strict(s, cfg.noise.rate(), "bipolar_slow_noise_exponential_moment");
        if (cfg.noise.kind() == Noise::Kind::Custom)
            return tag(cfg.noise.laplace_neg(s).is_finite() ? Verdict::Finite : Verdict::Infinite,
                       "bipolar_noise_moment");
    }
    return tag(Verdict::Finite, "bipolar_finite_factors");
}

std::optional<PhaseVerdict> ipnr_rule(const ScenarioConfig& cfg)
{
    require_valid(cfg);
    const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver);
    if (!ipnr)
        throw UnsupportedModel("IPNR rule applied to receiver model '" + receiver_name(cfg.receiver) + "'");
    if (auto early = unbounded_preamble(cfg))
        return early;
    std::string noise_rule;
    const NoiseGrowth growth = noise_growth(cfg, noise_rule);
    if (growth == NoiseGrowth::Explosive)
        return tag(Verdict::Infinite, noise_rule);

    const double beta = cfg.pathloss.beta();
    const ExtendedReal th = theta(cfg.p, cfg.T, beta);
    const double rhs = kPi * ipnr->lambda0;
    const double lhs = cfg.lambda * th.as_double();
    std::optional<PhaseVerdict> v;
    if (cfg.pathloss.kind() == PathLoss::Kind::PowerLaw) {
        v = strict(lhs, rhs, "ipnr_interference_threshold");
    } else if (cfg.pathloss.kind() == PathLoss::Kind::MaxOne && cfg.pathloss.scale() == 1.0 && beta == 4.0) {
        const double hat = cfg.p == 1.0 ? std::numeric_limits<double>::infinity()
                                        : kPi / 2.0 * cfg.p / std::sqrt(1.0 - cfg.p) * std::sqrt(cfg.T);
        v = strict(cfg.lambda * hat, ipnr->lambda0, "ipnr_pole_free");
    } else {
        v = strict(lhs, rhs, "ipnr_asymptotic_threshold");
    }
    if (v->verdict == Verdict::Finite && growth == NoiseGrowth::Unknown)
        return std::nullopt;
    return v;
}

std::optional<PhaseVerdict> mnn_rule(const ScenarioConfig& cfg, MnnRule rule)
{
    require_valid(cfg);
    if (!std::holds_alternative<MnnReceiver>(cfg.receiver))
        throw UnsupportedModel("MNN rule applied to receiver model '" + receiver_name(cfg.receiver) + "'");
    if (auto early = unbounded_preamble(cfg))
        return early;
    if (cfg.p == 1.0)
        return tag(Verdict::Infinite, "mnn_full_access");
    std::string noise_rule;
    const NoiseGrowth growth = noise_growth(cfg, noise_rule);
    if (growth == NoiseGrowth::Explosive)
        return tag(Verdict::Infinite, noise_rule);

    const double beta = cfg.pathloss.beta();
    const double th = theta(cfg.p, cfg.T, beta).value();
    PhaseVerdict v;
    if (rule == MnnRule::Exact) {
        const double P = th / k_beta(beta);
        const double j = j_integral((1.0 - cfg.p) * cfg.T, beta / 2.0);
        v = strict(P * (k_beta(beta) + j) / 2.0, kPi, "mnn_exact_threshold");
    } else if (th < kPi) {
        v = tag(Verdict::Finite, "mnn_bound_threshold", th, kPi);
    } else if (th > 2.0 * kPi) {
        v = tag(Verdict::Infinite, "mnn_bound_threshold", th, 2.0 * kPi);
    } else {
        v = tag(Verdict::Indeterminate, "mnn_bound_threshold", th, kPi);
    }
    if (v.verdict != Verdict::Infinite && growth == NoiseGrowth::Unknown)
        return std::nullopt;
    return v;
}

std::optional<PhaseVerdict> noise_limited_rule(const ScenarioConfig& cfg)
{
    require_valid(cfg);
    const double density = unbounded_density(cfg);
    if (cfg.p == 0.0)
        return tag(Verdict::Infinite, "no_transmission");
    if (cfg.noise.is_null())
        return tag(Verdict::Finite, "noise_free");
    if (cfg.variability.fading == TimeScale::Slow) {
        if (cfg.noise.kind() == Noise::Kind::Constant)
            return tag(Verdict::Infinite, "slow_fading_constant_noise");
        if (cfg.variability.noise == TimeScale::Slow)
            return tag(Verdict::Infinite, "slow_fading_slow_noise");
        throw UnsupportedModel("no analytic rule for slow fading with fast random noise");
    }

    if (cfg.fading.kind() == Fading::Kind::Rayleigh) {
        switch (cfg.noise.kind()) {
        case Noise::Kind::Constant:
            return tag(Verdict::Infinite, "noise_limited_constant_noise");
        case Noise::Kind::Exponential:
            if (cfg.variability.noise == TimeScale::Fast)
                return tag(Verdict::Finite, "noise_limited_rational_laplace");
            return tag(Verdict::Infinite, "slow_noise_unbounded_distance");
        default:
            return std::nullopt;
        }
    }
    if (cfg.noise.kind() != Noise::Kind::Constant)
        throw UnsupportedModel("noise-limited delay with " + to_string(cfg.fading.kind()) +
                               " fading needs constant noise");

    const double w = cfg.noise.level();
    switch (cfg.fading.kind()) {
    case Fading::Kind::Weibull: {
        const double k = cfg.fading.shape();
        const double bk = cfg.pathloss.beta() * k;
        if (bk != 2.0)
            return strict(bk, 2.0, "noise_limited_weibull");
        // Both sides quadratic in r: compare coefficients.
        const double A = cfg.pathloss.scale();
        return strict(std::pow(w * cfg.T / cfg.fading.scale(), k) * A * A, kPi * density, "noise_limited_weibull");
    }
    case Fading::Kind::LogNormal:
        return tag(Verdict::Finite, "noise_limited_lognormal");
    case Fading::Kind::Deterministic:
        return tag(Verdict::Infinite, "noise_limited_deterministic");
    case Fading::Kind::Rayleigh:
        break;
    }
    return std::nullopt;
}

std::optional<PhaseVerdict> high_mobility_rule(const ScenarioConfig& cfg)
{
    require_valid(cfg);
    const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver);
    if (!ipnr)
        throw UnsupportedModel("high-mobility rule needs IPNR receivers");
    if (cfg.p == 0.0)
        return tag(Verdict::Infinite, "no_transmission");
    if (!rayleigh_fast(cfg) || cfg.variability.noise != TimeScale::Fast)
        throw UnsupportedModel("high-mobility delay needs fast Rayleigh fading and fast noise");
    std::string noise_rule;
    const NoiseGrowth growth = noise_growth(cfg, noise_rule);
    if (growth == NoiseGrowth::Explosive)
        return tag(Verdict::Infinite, noise_rule);
    const double beta = cfg.pathloss.beta();
    const double lhs = cfg.lambda * cfg.p * std::pow(cfg.T, 2.0 / beta) * k_beta(beta);
    PhaseVerdict v = strict(lhs, kPi * ipnr->lambda0, "high_mobility_threshold");
    if (v.verdict == Verdict::Finite && growth == NoiseGrowth::Unknown)
        return std::nullopt;
    return v;
}

std::optional<PhaseVerdict> bounded_receiver_rule(const ScenarioConfig& cfg)
{
    require_valid(cfg);
    const auto* grid = std::get_if<PoissonPlusGridReceiver>(&cfg.receiver);
    if (!grid)
        throw UnsupportedModel("bounded-receiver rule needs Poisson plus grid receivers");
    if (cfg.p == 0.0)
        return tag(Verdict::Infinite, "no_transmission");
    if (slow_fading_slow_noise(cfg) && cfg.fading.kind() != Fading::Kind::Deterministic)
        return tag(Verdict::Infinite, "slow_fading_slow_noise");
    if (!rayleigh_fast(cfg))
        throw UnsupportedModel("bounded-receiver delay needs fast Rayleigh fading");
    if (cfg.mobility == Mobility::Resampled)
        throw UnsupportedModel("bounded-receiver delay is implemented for a static MANET only");
    if (cfg.interference == InterferenceMode::Present && cfg.p == 1.0 && cfg.pathloss.has_pole())
        return tag(Verdict::Infinite, "full_access_pole");

    const double s_max = cfg.fading.mu() * cfg.T * cfg.pathloss(grid->kappa);
    if (cfg.variability.noise == TimeScale::Slow) {
        if (cfg.noise.kind() == Noise::Kind::Exponential)
            return strict(s_max, cfg.noise.rate(), "bounded_receiver_distance");
        if (cfg.noise.kind() == Noise::Kind::Custom && cfg.noise.laplace_neg(s_max).is_infinite())
            return tag(Verdict::Infinite, "bounded_receiver_distance");
    }
    return tag(Verdict::Finite, "bounded_receiver_distance");
}

} // namespace detail

PhaseVerdict phase_classify(const ScenarioConfig& cfg, MnnRule mnn_rule)
{
    std::optional<PhaseVerdict> v;
    const bool cancelled = cfg.interference == InterferenceMode::Cancelled;
    if (std::holds_alternative<BipolarReceiver>(cfg.receiver)) {
        v = detail::bipolar_rule(cfg);
    } else if (std::holds_alternative<PoissonPlusGridReceiver>(cfg.receiver)) {
        v = detail::bounded_receiver_rule(cfg);
    } else if (cancelled) {
        v = detail::noise_limited_rule(cfg);
    } else if (cfg.mobility == Mobility::Resampled) {
        if (!std::holds_alternative<IpnrReceiver>(cfg.receiver))
            throw UnsupportedModel("a resampled MANET is covered for IPNR receivers only");
        v = detail::high_mobility_rule(cfg);
    } else if (std::holds_alternative<IpnrReceiver>(cfg.receiver)) {
        v = detail::ipnr_rule(cfg);
    } else {
        v = detail::mnn_rule(cfg, mnn_rule);
    }
    if (!v)
        throw UnsupportedModel("no analytic rule covers this custom noise law; use the simulation diagnostics");
    return *v;
}

} // namespace manet::analytic
