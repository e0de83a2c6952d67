#include <cmath>

#include "manet/analytic.hpp"

namespace manet::analytic {

namespace {

/// e^a E1(a) for a > 0; asymptotic series once e^a would overflow.
double scaled_e1(double a)
{
    if (a < 500.0)
        return -std::exp(a) * std::expint(-a);
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 12; ++k) {
        term *= -k / a;
        sum += term;
    }
    return sum;
}

} // namespace

DelayValue shannon_delay_from_snr_scale(double a, double p)
{
    if (!(a > 0.0))
        throw DomainError("Shannon delay needs a positive noise scale: with W = 0 and no interference the "
                          "rate integral diverges and the delay degenerates to 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("Shannon delay needs p in [0, 1]");
    if (p == 0.0)
        return {ExtendedReal::infinite(), Method::ThresholdRule, 0.0};
    return {ExtendedReal::finite(1.0 / (p * scaled_e1(a))), Method::ClosedForm, 0.0};
}

DelayValue mean_shannon_delay_interference_free(double r, double mu, double w, double p, const PathLoss& pathloss)
{
    if (!(r > 0.0) || !(mu > 0.0))
        throw DomainError("Shannon delay needs r > 0 and mu > 0");
    if (!(w >= 0.0))
        throw DomainError("Shannon delay needs w >= 0");
    return shannon_delay_from_snr_scale(mu * pathloss(r) * w, p);
}

} // namespace manet::analytic
