#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "manet/quadrature.hpp"
#include "rules.hpp"

namespace manet::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

DelayValue infinite_by_rule()
{
    return {ExtendedReal::infinite(), Method::ThresholdRule, 0.0};
}

DelayValue closed(double v)
{
    return {ExtendedReal::finite(v), Method::ClosedForm, 0.0};
}

struct Outer
{
    std::function<double(double)> log_density; ///< -inf where the density vanishes
    std::function<ExtendedReal(double)> log_factor;
    std::vector<double> breaks;                  ///< first = lower limit; last = upper limit if bounded
    bool bounded = false;
    double scale = 1.0;                          ///< where the integrand lives
    bool growth_test = false;                    ///< doubling-window divergence test
};

/// log of the outer integral of density * exp(log_factor), or infinite.
ExtendedReal log_outer_integral(const Outer& o, double& rel_error)
{
    const double lo = o.breaks.front();
    const double hi = o.bounded ? o.breaks.back() : std::numeric_limits<double>::infinity();

    // Offset so that the integrand peaks near 1.
    double offset = kNegInf;
    std::vector<double> probes;
    for (int k = 1; k <= 32; ++k)
        probes.push_back(lo + o.scale * k / 8.0);
    for (int k = -24; k <= 40; ++k)
        probes.push_back(lo + o.scale * std::pow(2.0, k / 4.0));
    for (double r : probes) {
        if (r >= hi)
            continue;
        const double ld = o.log_density(r);
        if (ld == kNegInf)
            continue;
        const ExtendedReal h = o.log_factor(r);
        if (h.is_infinite())
            return ExtendedReal::infinite();
        offset = std::max(offset, ld + h.value());
    }
    if (offset == kNegInf)
        offset = 0.0;

    bool hit_infinite = false;
    const auto f = [&](double r) {
        const double ld = o.log_density(r);
        if (ld == kNegInf)
            return 0.0;
        const ExtendedReal h = o.log_factor(r);
        if (h.is_infinite()) {
            hit_infinite = true;
            return 0.0;
        }
        return std::exp(ld + h.value() - offset);
    };

    quad::Options opt;
    opt.rel_tol = 1e-10;
    double total = 0.0;
    double err = 0.0;
    const auto fail = [&](const quad::Result& r) {
        std::ostringstream os;
        os << "outer integral did not converge: partial sum " << (total + r.value) * std::exp(offset)
           << ", error estimate " << (err + r.abs_error) * std::exp(offset);
        throw NumericError(os.str());
    };

    if (o.growth_test && !o.bounded) {
        // Three consecutive doublings each growing by more than 1.5 signal divergence.
        double partial = 0.0;
        double left = lo;
        int streak = 0;
        for (int k = 0; k < 16; ++k) {
            const double right = lo + o.scale * std::ldexp(1.0, k);
            const quad::Result piece = quad::integrate(f, left, right, opt);
            const double next = partial + piece.value;
            if (hit_infinite || !std::isfinite(next))
                return ExtendedReal::infinite();
            streak = (partial > 0.0 && next > 1.5 * partial) ? streak + 1 : 0;
            if (streak >= 3)
                return ExtendedReal::infinite();
            partial = next;
            left = right;
        }
    }

    for (std::size_t i = 0; i + 1 < o.breaks.size(); ++i) {
        const quad::Result piece = quad::integrate(f, o.breaks[i], o.breaks[i + 1], opt);
        if (!piece.converged)
            fail(piece);
        total += piece.value;
        err += piece.abs_error;
    }
    if (!o.bounded) {
        const quad::Result tail = quad::integrate_to_infinity(f, o.breaks.back(), o.scale, opt);
        if (!tail.converged)
            fail(tail);
        total += tail.value;
        err += tail.abs_error;
    }
    if (hit_infinite)
        return ExtendedReal::infinite();
    if (!(total > 0.0))
        throw NumericError("outer integral vanished; the integrand underflows everywhere");
    rel_error = err / total;
    return ExtendedReal::finite(offset + std::log(total));
}

DelayValue finish(double log_prefactor, const Outer& o)
{
    double rel = 0.0;
    const ExtendedReal lv = log_outer_integral(o, rel);
    if (lv.is_infinite())
        return {ExtendedReal::infinite(), Method::Quadrature, 0.0};
    const ExtendedReal v = exp_extended(ExtendedReal::finite(log_prefactor + lv.value()));
    return {v, Method::Quadrature, v.value() * rel};
}

/// Log-density of the distance to the nearest point of a Poisson process.
std::function<double(double)> poisson_nearest_log_density(double density)
{
    return [density](double r) {
        if (r <= 0.0)
            return kNegInf;
        return std::log(2.0 * kPi * density * r) - kPi * density * r * r;
    };
}

double gaussian_scale(double coefficient, double fallback)
{
    return 1.0 / std::sqrt(coefficient > 0.0 ? coefficient : fallback);
}

Evaluation inner(Evaluation how)
{
    return how == Evaluation::Quadrature ? Evaluation::Quadrature : Evaluation::Auto;
}

ExtendedReal noise_term(const ScenarioConfig& cfg, double r)
{
    return log_noise_factor(cfg.fading.mu() * cfg.T * cfg.pathloss(r), cfg.noise, cfg.variability.noise);
}

ExtendedReal add(const ExtendedReal& a, const ExtendedReal& b)
{
    if (a.is_infinite() || b.is_infinite())
        return ExtendedReal::infinite();
    return ExtendedReal::finite(a.value() + b.value());
}

/// MNN exponent coefficient (lambda/2) P (K + J) for power-law attenuation.
double mnn_coefficient(const ScenarioConfig& cfg)
{
    const double beta = cfg.pathloss.beta();
    const double kb = k_beta(beta);
    const double P = theta(cfg.p, cfg.T, beta).value() / kb;
    return cfg.lambda * P * (kb + j_integral((1.0 - cfg.p) * cfg.T, beta / 2.0)) / 2.0;
}

} // namespace

DelayValue mean_delay_bipolar(const ScenarioConfig& cfg, Evaluation how)
{
    const auto rule = detail::bipolar_rule(cfg);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    const double r = std::get<BipolarReceiver>(cfg.receiver).r;
    const double c = cfg.T * cfg.pathloss(r);

    if (cfg.fading.kind() != Fading::Kind::Rayleigh)
        return {exp_extended(ExtendedReal::finite(-std::log(cfg.p) - detail::log_noise_success(cfg, r))),
                Method::ClosedForm, 0.0};

    const ExtendedReal noise = log_noise_factor(cfg.fading.mu() * c, cfg.noise, cfg.variability.noise);
    if (noise.is_infinite())
        return infinite_by_rule();
    double log_value = -std::log(cfg.p) + noise.value();
    Method method = Method::ClosedForm;
    double rel = 0.0;
    if (cfg.interference == InterferenceMode::Present) {
        const double q = cfg.mobility == Mobility::Resampled ? 1.0 : 1.0 - cfg.p;
        const LogFactor f = radial_shot_integral(c, cfg.p, q, cfg.pathloss, 0.0, how);
        if (f.log_value.is_infinite())
            return {ExtendedReal::infinite(), f.method, 0.0};
        const double scale = 2.0 * kPi * cfg.lambda;
        log_value += scale * f.log_value.value();
        method = f.method;
        rel = scale * f.abs_error;
    }
    const ExtendedReal v = exp_extended(ExtendedReal::finite(log_value));
    return {v, method, v.value() * rel};
}

DelayValue mean_delay_ipnr(const ScenarioConfig& cfg, Evaluation how)
{
    const auto rule = detail::ipnr_rule(cfg);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    const double lambda0 = std::get<IpnrReceiver>(cfg.receiver).lambda0;
    const double beta = cfg.pathloss.beta();
    const double lt = cfg.lambda * theta(cfg.p, cfg.T, beta).value();

    if (cfg.pathloss.kind() == PathLoss::Kind::PowerLaw && cfg.noise.is_null() && how != Evaluation::Quadrature)
        return closed((1.0 / cfg.p) * kPi * lambda0 / (kPi * lambda0 - lt));
    if (how == Evaluation::ClosedForm)
        throw DomainError("no closed form for the IPNR delay with this path loss or noise");

    Outer o;
    o.log_density = poisson_nearest_log_density(lambda0);
    o.log_factor = [&cfg, how](double r) {
        const double s = cfg.T * cfg.pathloss(r);
        return add(noise_term(cfg, r),
                   interference_exponent_inr(s, cfg.lambda, cfg.p, cfg.pathloss, inner(how)).log_value);
    };
    o.breaks = {0.0};
    o.scale = gaussian_scale(kPi * lambda0 - lt, kPi * lambda0);
    o.growth_test = !rule;
    return finish(-std::log(cfg.p), o);
}

DelayValue mean_delay_mnn(const ScenarioConfig& cfg, Evaluation how)
{
    const auto rule = detail::mnn_rule(cfg, MnnRule::Exact);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    const double prefactor = 1.0 / (cfg.p * (1.0 - cfg.p));
    const double coef = mnn_coefficient(cfg);
    const double disc = kPi * cfg.lambda;
    const bool power_law = cfg.pathloss.kind() == PathLoss::Kind::PowerLaw;

    if (power_law && cfg.noise.is_null() && how != Evaluation::Quadrature)
        return closed(prefactor * disc / (disc - coef));
    if (how == Evaluation::ClosedForm)
        throw DomainError("no closed form for the MNN delay with this path loss or noise");

    Outer o;
    o.log_density = poisson_nearest_log_density(cfg.lambda);
    o.log_factor = [&cfg, how, coef, power_law](double r) {
        if (power_law && how != Evaluation::Quadrature)
            return add(noise_term(cfg, r), ExtendedReal::finite(coef * r * r));
        const double s = cfg.T * cfg.pathloss(r);
        return add(noise_term(cfg, r),
                   interference_exponent_mnn(r, s, cfg.lambda, cfg.p, cfg.pathloss, inner(how)).log_value);
    };
    o.breaks = {0.0};
    o.scale = gaussian_scale(disc - coef, disc);
    o.growth_test = !rule;
    return finish(std::log(prefactor), o);
}

DelayValue mean_delay_noise_limited(const ScenarioConfig& cfg)
{
    const auto rule = detail::noise_limited_rule(cfg);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    if (cfg.noise.is_null())
        return closed(1.0 / cfg.p);
    const double density = std::holds_alternative<IpnrReceiver>(cfg.receiver)
                               ? std::get<IpnrReceiver>(cfg.receiver).lambda0
                               : cfg.lambda;
    const bool rayleigh = cfg.fading.kind() == Fading::Kind::Rayleigh;

    Outer o;
    o.log_density = poisson_nearest_log_density(density);
    o.log_factor = [&cfg, rayleigh](double r) {
        if (rayleigh)
            return noise_term(cfg, r);
        const double lt = detail::log_noise_success(cfg, r);
        return lt == kNegInf ? ExtendedReal::infinite() : ExtendedReal::finite(-lt);
    };
    o.breaks = {0.0};
    double coefficient = kPi * density;
    if (cfg.fading.kind() == Fading::Kind::Weibull && cfg.pathloss.beta() * cfg.fading.shape() == 2.0) {
        const double A = cfg.pathloss.scale();
        coefficient -= std::pow(cfg.noise.level() * cfg.T / cfg.fading.scale(), cfg.fading.shape()) * A * A;
    }
    o.scale = gaussian_scale(coefficient, kPi * density);
    o.growth_test = !rule;
    return finish(-std::log(cfg.p), o);
}

DelayValue mean_delay_high_mobility_ipnr(const ScenarioConfig& cfg, Evaluation how)
{
    const auto rule = detail::high_mobility_rule(cfg);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    const double lambda0 = std::get<IpnrReceiver>(cfg.receiver).lambda0;
    const double beta = cfg.pathloss.beta();
    const double growth = cfg.lambda * cfg.p * std::pow(cfg.T, 2.0 / beta) * k_beta(beta);

    if (cfg.pathloss.kind() == PathLoss::Kind::PowerLaw && cfg.noise.is_null() && how != Evaluation::Quadrature)
        return closed((1.0 / cfg.p) * kPi * lambda0 / (kPi * lambda0 - growth));
    if (how == Evaluation::ClosedForm)
        throw DomainError("no closed form for the high-mobility delay with this path loss or noise");

    Outer o;
    o.log_density = poisson_nearest_log_density(lambda0);
    o.log_factor = [&cfg, how](double r) {
        const double s = cfg.T * cfg.pathloss(r);
        const LogFactor f = radial_shot_integral(s, cfg.p, 1.0, cfg.pathloss, 0.0, inner(how));
        const ExtendedReal interference =
            f.log_value.is_infinite() ? f.log_value
                                      : ExtendedReal::finite(2.0 * kPi * cfg.lambda * f.log_value.value());
        return add(noise_term(cfg, r), interference);
    };
    o.breaks = {0.0};
    o.scale = gaussian_scale(kPi * lambda0 - growth, kPi * lambda0);
    o.growth_test = !rule;
    return finish(-std::log(cfg.p), o);
}

double bounded_receiver_survival(double r, double lambda0, double kappa)
{
    if (!(lambda0 > 0.0) || !(kappa > 0.0))
        throw DomainError("bounded receiver law needs lambda0 > 0 and kappa > 0");
    if (r <= 0.0)
        return 1.0;
    if (r >= kappa)
        return 0.0;
    const double a2 = 2.0 * kappa * kappa;
    const double h0 = kappa / std::numbers::sqrt2;
    double g = kPi * r * r;
    if (r > h0)
        g -= 4.0 * (r * r * std::acos(h0 / r) - h0 * std::sqrt(r * r - h0 * h0));
    return std::exp(-kPi * lambda0 * r * r) * (1.0 - g / a2);
}

double bounded_receiver_density(double r, double lambda0, double kappa)
{
    if (!(lambda0 > 0.0) || !(kappa > 0.0))
        throw DomainError("bounded receiver law needs lambda0 > 0 and kappa > 0");
    if (r <= 0.0 || r >= kappa)
        return 0.0;
    const double a2 = 2.0 * kappa * kappa;
    const double h0 = kappa / std::numbers::sqrt2;
    double g = kPi * r * r;
    double dg = 2.0 * kPi * r;
    if (r > h0) {
        const double ac = std::acos(h0 / r);
        g -= 4.0 * (r * r * ac - h0 * std::sqrt(r * r - h0 * h0));
        dg -= 8.0 * r * ac;
    }
    return std::exp(-kPi * lambda0 * r * r) * (2.0 * kPi * lambda0 * r * (1.0 - g / a2) + dg / a2);
}

DelayValue mean_delay_bounded_receiver(const ScenarioConfig& cfg)
{
    const auto rule = detail::bounded_receiver_rule(cfg);
    if (rule && rule->verdict == Verdict::Infinite)
        return infinite_by_rule();
    const auto grid = std::get<PoissonPlusGridReceiver>(cfg.receiver);
    const bool interference = cfg.interference == InterferenceMode::Present;
    if (cfg.noise.is_null() && !interference)
        return closed(1.0 / cfg.p);

    Outer o;
    o.log_density = [grid](double r) {
        const double d = bounded_receiver_density(r, grid.lambda0, grid.kappa);
        return d > 0.0 ? std::log(d) : kNegInf;
    };
    o.log_factor = [&cfg, interference](double r) {
        ExtendedReal h = noise_term(cfg, r);
        if (interference)
            h = add(h, interference_exponent_inr(cfg.T * cfg.pathloss(r), cfg.lambda, cfg.p, cfg.pathloss).log_value);
        return h;
    };
    o.breaks = {0.0, grid.kappa / std::numbers::sqrt2, grid.kappa};
    o.bounded = true;
    o.scale = grid.kappa;
    return finish(-std::log(cfg.p), o);
}

DelayValue mean_delay(const ScenarioConfig& cfg)
{
    if (std::holds_alternative<BipolarReceiver>(cfg.receiver))
        return mean_delay_bipolar(cfg);
    if (std::holds_alternative<PoissonPlusGridReceiver>(cfg.receiver))
        return mean_delay_bounded_receiver(cfg);
    if (cfg.interference == InterferenceMode::Cancelled)
        return mean_delay_noise_limited(cfg);
    if (cfg.mobility == Mobility::Resampled) {
        if (!std::holds_alternative<IpnrReceiver>(cfg.receiver))
            throw UnsupportedModel("a resampled MANET is covered for IPNR receivers only");
        return mean_delay_high_mobility_ipnr(cfg);
    }
    if (std::holds_alternative<IpnrReceiver>(cfg.receiver))
        return mean_delay_ipnr(cfg);
    return mean_delay_mnn(cfg);
}

} // namespace manet::analytic
