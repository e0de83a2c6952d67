#include "manet/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "manet/quadrature.hpp"

namespace manet {

std::string ExtendedReal::to_string() const
{
    if (infinite_)
        return "INF";
    std::ostringstream os;
    os.precision(7);
    os << value_;
    return os.str();
}

ExtendedReal exp_extended(const ExtendedReal& log_value)
{
    if (log_value.is_infinite())
        return ExtendedReal::infinite();
    const double v = std::exp(log_value.value());
    if (!std::isfinite(v))
        throw NumericError("finite quantity overflows double: exp(" + std::to_string(log_value.value()) + ")");
    return ExtendedReal::finite(v);
}

// ---------------------------------------------------------------------------

double PathLoss::operator()(double u) const
{
    const auto base = [this](double x) { return std::pow(scale_ * x, beta_); };
    switch (kind_) {
    case Kind::PowerLaw:
        return base(u);
    case Kind::MaxOne:
        return std::max(1.0, base(u));
    case Kind::Shifted:
        return base(u + 1.0);
    case Kind::Truncated:
        return base(std::max(u, u0_));
    }
    return base(u);
}

std::string to_string(PathLoss::Kind kind)
{
    switch (kind) {
    case PathLoss::Kind::PowerLaw: return "power_law";
    case PathLoss::Kind::MaxOne: return "max_one";
    case PathLoss::Kind::Shifted: return "shifted";
    case PathLoss::Kind::Truncated: return "truncated";
    }
    return "?";
}

// ---------------------------------------------------------------------------

namespace {

/// log(0.5 * erfc(z)) without underflow for large z.
double log_half_erfc(double z)
{
    if (z < 20.0)
        return std::log(0.5 * std::erfc(z));
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / (2.0 * z2) + 3.0 / (4.0 * z2 * z2) - 15.0 / (8.0 * z2 * z2 * z2);
    return -z2 - std::log(2.0 * z * std::sqrt(std::numbers::pi)) + std::log(series);
}

double standard_normal(RandomStream& rng)
{
    const double u1 = rng.uniform_pos();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

double Fading::sample(RandomStream& rng) const
{
    switch (kind_) {
    case Kind::Rayleigh:
        return -std::log(rng.uniform_pos()) / a_;
    case Kind::Deterministic:
        return 1.0 / a_;
    case Kind::Weibull:
        return b_ * std::pow(-std::log(rng.uniform_pos()), 1.0 / a_);
    case Kind::LogNormal:
        return std::exp(a_ + b_ * standard_normal(rng));
    }
    return 0.0;
}

double Fading::mean() const
{
    switch (kind_) {
    case Kind::Rayleigh:
    case Kind::Deterministic:
        return 1.0 / a_;
    case Kind::Weibull:
        return b_ * std::tgamma(1.0 + 1.0 / a_);
    case Kind::LogNormal:
        return std::exp(a_ + 0.5 * b_ * b_);
    }
    return 0.0;
}

double Fading::tail(double x) const
{
    if (x < 0.0)
        return 1.0;
    switch (kind_) {
    case Kind::Rayleigh:
        return std::exp(-a_ * x);
    case Kind::Deterministic:
        return x < 1.0 / a_ ? 1.0 : 0.0;
    case Kind::Weibull:
        return std::exp(-std::pow(x / b_, a_));
    case Kind::LogNormal:
        if (x == 0.0)
            return 1.0;
        return 0.5 * std::erfc((std::log(x) - a_) / (b_ * std::numbers::sqrt2));
    }
    return 0.0;
}

double Fading::log_tail(double x) const
{
    if (x <= 0.0)
        return 0.0;
    switch (kind_) {
    case Kind::Rayleigh:
        return -a_ * x;
    case Kind::Deterministic:
        return x < 1.0 / a_ ? 0.0 : -std::numeric_limits<double>::infinity();
    case Kind::Weibull:
        return -std::pow(x / b_, a_);
    case Kind::LogNormal:
        return log_half_erfc((std::log(x) - a_) / (b_ * std::numbers::sqrt2));
    }
    return 0.0;
}

double Fading::laplace(double xi) const
{
    if (xi < 0.0)
        throw DomainError("Fading::laplace requires xi >= 0");
    if (xi == 0.0)
        return 1.0;
    switch (kind_) {
    case Kind::Rayleigh:
        return a_ / (a_ + xi);
    case Kind::Deterministic:
        return std::exp(-xi / a_);
    case Kind::Weibull:
    case Kind::LogNormal:
        break;
    }
    // E[e^{-xi F}] = 1 - xi * int_0^inf e^{-xi x} P(F > x) dx
    quad::Options opt;
    opt.rel_tol = 1e-9;
    const auto integrand = [&](double x) { return std::exp(-xi * x) * tail(x); };
    const double length = std::min(1.0 / xi, mean());
    const quad::Result r = quad::integrate_to_infinity(integrand, 0.0, length, opt);
    if (!r.converged)
        throw NumericError("fading Laplace transform quadrature did not converge");
    return 1.0 - xi * r.value;
}

std::string to_string(Fading::Kind kind)
{
    switch (kind) {
    case Fading::Kind::Rayleigh: return "rayleigh";
    case Fading::Kind::Deterministic: return "deterministic";
    case Fading::Kind::Weibull: return "weibull";
    case Fading::Kind::LogNormal: return "lognormal";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Noise Noise::custom(Callbacks cb)
{
    if (!cb.sample || !cb.tail || !cb.laplace || !cb.laplace_neg)
        throw std::invalid_argument("custom noise needs sample, tail, laplace and laplace_neg callbacks");
    Noise n(Kind::Custom, 0.0);
    n.callbacks_ = std::make_shared<const Callbacks>(std::move(cb));
    return n;
}

double Noise::sample(RandomStream& rng) const
{
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return param_;
    case Kind::Exponential: return -std::log(rng.uniform_pos()) / param_;
    case Kind::Custom: return callbacks_->sample(rng);
    }
    return 0.0;
}

double Noise::laplace(double xi) const
{
    return std::exp(log_laplace(xi));
}

double Noise::log_laplace(double xi) const
{
    if (xi < 0.0)
        throw DomainError("Noise::laplace requires xi >= 0; use laplace_neg");
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return -xi * param_;
    case Kind::Exponential: return std::log(param_ / (param_ + xi));
    case Kind::Custom: return std::log(callbacks_->laplace(xi));
    }
    return 0.0;
}

ExtendedReal Noise::laplace_neg(double s) const
{
    return exp_extended(log_laplace_neg(s));
}

ExtendedReal Noise::log_laplace_neg(double s) const
{
    if (s < 0.0)
        throw DomainError("Noise::laplace_neg requires s >= 0");
    switch (kind_) {
    case Kind::Zero:
        return ExtendedReal::finite(0.0);
    case Kind::Constant:
        return ExtendedReal::finite(s * param_);
    case Kind::Exponential:
        if (s < param_)
            return ExtendedReal::finite(std::log(param_ / (param_ - s)));
        return ExtendedReal::infinite();
    case Kind::Custom: {
        const ExtendedReal v = callbacks_->laplace_neg(s);
        if (v.is_infinite())
            return v;
        return ExtendedReal::finite(std::log(v.value()));
    }
    }
    return ExtendedReal::finite(0.0);
}

double Noise::tail(double x) const
{
    switch (kind_) {
    case Kind::Zero: return x < 0.0 ? 1.0 : 0.0;
    case Kind::Constant: return x < param_ ? 1.0 : 0.0;
    case Kind::Exponential: return x < 0.0 ? 1.0 : std::exp(-param_ * x);
    case Kind::Custom: return callbacks_->tail(x);
    }
    return 0.0;
}

std::string to_string(Noise::Kind kind)
{
    switch (kind) {
    case Noise::Kind::Zero: return "zero";
    case Noise::Kind::Constant: return "constant";
    case Noise::Kind::Exponential: return "exponential";
    case Noise::Kind::Custom: return "custom";
    }
    return "?";
}

} // namespace manet
