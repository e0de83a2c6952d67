#pragma once

#include <functional>
#include <memory>
#include <string>

#include "manet/extended_real.hpp"
#include "manet/rng.hpp"

namespace manet {

/// Mean path-loss function l(u). All variants are built from the power law
/// (A u)^beta; the three pole-free variants are bounded away from zero at u = 0.
class PathLoss
{
  public:
    enum class Kind { PowerLaw, MaxOne, Shifted, Truncated };

    static PathLoss power_law(double scale, double beta) { return {Kind::PowerLaw, scale, beta, 0.0}; }
    static PathLoss max_one(double scale, double beta) { return {Kind::MaxOne, scale, beta, 0.0}; }
    static PathLoss shifted(double scale, double beta) { return {Kind::Shifted, scale, beta, 0.0}; }
    static PathLoss truncated(double scale, double beta, double u0) { return {Kind::Truncated, scale, beta, u0}; }

    Kind kind() const { return kind_; }
    double scale() const { return scale_; }
    double beta() const { return beta_; }
    double u0() const { return u0_; }

    double operator()(double u) const;

    /// True when l(0) = 0 (only the plain power law).
    bool has_pole() const { return kind_ == Kind::PowerLaw; }

  private:
    PathLoss(Kind k, double a, double b, double u0) : kind_(k), scale_(a), beta_(b), u0_(u0) {}

    Kind kind_;
    double scale_;
    double beta_;
    double u0_;
};

/// Free-function spelling of l(u).
inline double path_loss(const PathLoss& model, double u) { return model(u); }

std::string to_string(PathLoss::Kind kind);

/// Law of the virtual power F (transmit power times fading).
class Fading
{
  public:
    enum class Kind { Rayleigh, Deterministic, Weibull, LogNormal };

    /// Exponential F with mean 1/mu.
    static Fading rayleigh(double mu) { return {Kind::Rayleigh, mu, 0.0}; }
    /// F == 1/mu.
    static Fading deterministic(double mu) { return {Kind::Deterministic, mu, 0.0}; }
    /// P(F > x) = exp(-(x/c)^k).
    static Fading weibull(double shape, double scale) { return {Kind::Weibull, shape, scale}; }
    /// log F ~ N(m, sigma^2).
    static Fading lognormal(double log_mean, double log_std) { return {Kind::LogNormal, log_mean, log_std}; }

    Kind kind() const { return kind_; }

    double mu() const { return a_; }
    double shape() const { return a_; }
    double scale() const { return b_; }
    double log_mean() const { return a_; }
    double log_std() const { return b_; }

    double sample(RandomStream& rng) const;
    double mean() const;

    /// P(F > x).
    double tail(double x) const;
    /// log P(F > x), accurate far into the tail; -inf where the tail is 0.
    double log_tail(double x) const;

    /// E[exp(-xi F)] for xi >= 0. Closed form for Rayleigh and Deterministic,
    /// adaptive quadrature (relative tolerance 1e-9) otherwise.
    double laplace(double xi) const;

  private:
    Fading(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

std::string to_string(Fading::Kind kind);

/// Law of the thermal noise W.
class Noise
{
  public:
    enum class Kind { Zero, Constant, Exponential, Custom };

    /// User-supplied law. `laplace_neg` must return the infinite sentinel
    /// where E[exp(sW)] diverges.
    struct Callbacks
    {
        std::function<double(RandomStream&)> sample;
        std::function<double(double)> tail;
        std::function<double(double)> laplace;
        std::function<ExtendedReal(double)> laplace_neg;
    };

    static Noise zero() { return Noise(Kind::Zero, 0.0); }
    static Noise constant(double w) { return Noise(Kind::Constant, w); }
    /// Exponential with rate nu (mean 1/nu).
    static Noise exponential(double nu) { return Noise(Kind::Exponential, nu); }
    static Noise custom(Callbacks cb);

    Kind kind() const { return kind_; }
    double level() const { return param_; }
    double rate() const { return param_; }

    /// True when W == 0 almost surely.
    bool is_null() const { return kind_ == Kind::Zero || (kind_ == Kind::Constant && param_ == 0.0); }

    double sample(RandomStream& rng) const;
    /// E[exp(-xi W)], xi >= 0.
    double laplace(double xi) const;
    /// log E[exp(-xi W)], xi >= 0, without underflow for Constant noise.
    double log_laplace(double xi) const;
    /// E[exp(s W)], s >= 0; infinite where the exponential moment diverges.
    ExtendedReal laplace_neg(double s) const;
    /// log E[exp(s W)], s >= 0; infinite where it diverges.
    ExtendedReal log_laplace_neg(double s) const;
    /// P(W > x).
    double tail(double x) const;

  private:
    Noise(Kind k, double p) : kind_(k), param_(p) {}

    Kind kind_;
    double param_;
    std::shared_ptr<const Callbacks> callbacks_;
};

std::string to_string(Noise::Kind kind);

} // namespace manet
