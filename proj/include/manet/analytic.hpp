#pragma once

// Mean local delay of the typical node: closed forms, quadrature
// evaluations and phase classification.
//
// Conventions. s is the argument of the interference/noise factors. For
// Rayleigh fading the mark mu cancels inside the interference factors, so
// they are always evaluated at s = T l(r); noise factors take s = mu T l(r).
// Factors are handled in log space; "infinite" is an explicit verdict.

#include <string>

#include "manet/extended_real.hpp"
#include "manet/scenario.hpp"

namespace manet::analytic {

enum class Method { ClosedForm, Quadrature, ThresholdRule };

std::string to_string(Method m);

/// Which route to take where both a closed form and a quadrature exist.
enum class Evaluation { Auto, ClosedForm, Quadrature };

/// Spatial average of the mean local delay, E0[L].
struct DelayValue
{
    ExtendedReal value;
    Method method = Method::ClosedForm;
    double abs_error = 0.0;
};

enum class Verdict { Finite, Infinite, Indeterminate };

std::string to_string(Verdict v);

/// Outcome of a phase-transition rule. threshold_lhs/threshold_rhs are the two
/// sides of the governing inequality identified by `rule`; NaN when the rule
/// is not a threshold comparison.
struct PhaseVerdict
{
    Verdict verdict;
    double threshold_lhs;
    double threshold_rhs;
    std::string rule;
};

/// A log-factor with provenance.
struct LogFactor
{
    ExtendedReal log_value;
    Method method = Method::ClosedForm;
    double abs_error = 0.0;
};

// --- building blocks -------------------------------------------------------

/// K(beta) = 2 pi^2 / (beta sin(2 pi / beta)). Throws DomainError for beta <= 2.
double k_beta(double beta);

/// theta(p, T, beta) = p (1-p)^(2/beta - 1) T^(2/beta) K(beta); infinite at p = 1.
ExtendedReal theta(double p, double T, double beta);

/// D_W(s): E[e^{sW}] for slow noise, 1/E[e^{-sW}] for fast noise.
ExtendedReal noise_factor(double s, const Noise& noise, TimeScale variability);
ExtendedReal log_noise_factor(double s, const Noise& noise, TimeScale variability);

/// int_lower^inf p s v / (l(v) + q s) dv. q = 1 - p for a static MANET,
/// q = 1 for a MANET resampled every slot.
LogFactor radial_shot_integral(double s, double p, double q, const PathLoss& pathloss, double lower = 0.0,
                               Evaluation how = Evaluation::Auto);

/// log D_I^INR(s) = 2 pi lambda int_0^inf p s v / (l(v) + (1-p) s) dv.
LogFactor interference_exponent_inr(double s, double lambda, double p, const PathLoss& pathloss,
                                    Evaluation how = Evaluation::Auto);
ExtendedReal interference_factor_inr(double s, double lambda, double p, const PathLoss& pathloss,
                                     Evaluation how = Evaluation::Auto);

/// H(a, w, b) = int_{a^2 w^{-1/b}}^inf du / (1 + u^b), b > 1.
double h_integral(double a, double w, double b);
/// J(w, b) = int_{-pi/2}^{pi/2} H(2 cos t, w, b) dt, b > 1.
double j_integral(double w, double b);

/// log D_I^MNN(r, s): interferers form a Poisson process of density lambda
/// outside the ball B_0(r), seen from a receiver on its boundary.
LogFactor interference_exponent_mnn(double r, double s, double lambda, double p, const PathLoss& pathloss,
                                    Evaluation how = Evaluation::Auto);
ExtendedReal interference_factor_mnn(double r, double s, double lambda, double p, const PathLoss& pathloss,
                                     Evaluation how = Evaluation::Auto);

// --- mean local delays -----------------------------------------------------

/// Bipolar receivers, fast Rayleigh fading, fast or slow noise.
DelayValue mean_delay_bipolar(const ScenarioConfig& cfg, Evaluation how = Evaluation::Auto);

/// Independent Poisson nearest receivers, fast Rayleigh fading.
DelayValue mean_delay_ipnr(const ScenarioConfig& cfg, Evaluation how = Evaluation::Auto);

/// MANET nearest neighbour receivers, fast Rayleigh fading, 0 < p < 1.
DelayValue mean_delay_mnn(const ScenarioConfig& cfg, Evaluation how = Evaluation::Auto);

/// Interference perfectly cancelled; IPNR or MNN receivers. Rayleigh fading
/// with any noise, or any fading with constant noise.
DelayValue mean_delay_noise_limited(const ScenarioConfig& cfg);

/// IPNR receivers with the MANET resampled every slot (fast noise and fading).
DelayValue mean_delay_high_mobility_ipnr(const ScenarioConfig& cfg, Evaluation how = Evaluation::Auto);

/// Poisson receivers plus a square lattice guaranteeing a receiver within kappa.
DelayValue mean_delay_bounded_receiver(const ScenarioConfig& cfg);

/// Dispatches on receiver model, interference mode and mobility. Models
/// covered only by an infinite-mean rule return Infinite with ThresholdRule.
DelayValue mean_delay(const ScenarioConfig& cfg);

/// Law of the nearest-receiver distance in the Poisson + lattice model:
/// survival function and density.
double bounded_receiver_survival(double r, double lambda0, double kappa);
double bounded_receiver_density(double r, double lambda0, double kappa);

// --- phase transition ------------------------------------------------------

enum class MnnRule { Exact, Bounds };

/// Finite / infinite classification of E0[L]. Throws UnsupportedModel when no
/// analytic rule covers the configuration.
PhaseVerdict phase_classify(const ScenarioConfig& cfg, MnnRule mnn_rule = MnnRule::Exact);

// --- adaptive coding -------------------------------------------------------

/// Interference-free bipolar Shannon local delay with constant noise:
/// 1 / (p e^a E1(a)), a = mu l(r) w. Throws DomainError for w = 0.
DelayValue mean_shannon_delay_interference_free(double r, double mu, double w, double p, const PathLoss& pathloss);

/// Same quantity parameterised directly by a = mu l(r) w > 0.
DelayValue shannon_delay_from_snr_scale(double a, double p);

} // namespace manet::analytic
