#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "manet/channel.hpp"
#include "manet/rng.hpp"

using namespace manet;

namespace {

// -d/dxi L(xi) at 0 by Richardson extrapolation of forward differences.
double laplace_slope_at_zero(const Fading& f)
{
    auto d = [&](double h) { return (1.0 - f.laplace(h)) / h; };
    const double h = 0.02;
    const double d1 = d(h), d2 = d(h / 2), d4 = d(h / 4);
    const double r1 = 2 * d2 - d1, r2 = 2 * d4 - d2;
    return (4 * r2 - r1) / 3;
}

} // namespace

TEST_CASE("path loss variants")
{
    CHECK(PathLoss::power_law(1, 4)(2.0) == 16.0);
    CHECK(PathLoss::power_law(1, 4)(0.0) == 0.0);
    CHECK(PathLoss::max_one(1, 4)(0.5) == 1.0);
    CHECK(PathLoss::max_one(1, 4)(2.0) == 16.0);
    CHECK(PathLoss::truncated(1, 4, 1)(0.5) == 1.0);
    CHECK(PathLoss::shifted(1, 4)(1.0) == 16.0);
    CHECK(PathLoss::power_law(2, 3)(1.5) == doctest::Approx(27.0));
    CHECK(PathLoss::power_law(1, 4).has_pole());
    CHECK_FALSE(PathLoss::shifted(1, 4).has_pole());
}

TEST_CASE("fading laplace slope at zero matches the mean")
{
    const Fading laws[] = {Fading::rayleigh(2.0), Fading::deterministic(0.5), Fading::weibull(1.7, 1.3),
                           Fading::weibull(0.8, 0.6), Fading::lognormal(0.1, 0.4)};
    const double means[] = {0.5, 2.0, 1.3 * boost::math::tgamma(1 + 1 / 1.7), 0.6 * boost::math::tgamma(1 + 1 / 0.8),
                            std::exp(0.1 + 0.08)};
    for (int i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(laws[i].mean() == doctest::Approx(means[i]).epsilon(1e-12));
        CHECK(laplace_slope_at_zero(laws[i]) == doctest::Approx(means[i]).epsilon(1e-6));
    }
}

TEST_CASE("fading tails and laplace shape")
{
    const Fading r = Fading::rayleigh(1.5);
    for (double x : {0.0, 0.3, 2.0, 40.0})
        CHECK(r.tail(x) == std::exp(-1.5 * x));
    CHECK(r.log_tail(1000.0) == doctest::Approx(-1500.0));
    CHECK(Fading::deterministic(2.0).tail(0.4) == 1.0);
    CHECK(Fading::deterministic(2.0).tail(0.6) == 0.0);
    CHECK(Fading::weibull(0.5, 2.0).tail(8.0) == doctest::Approx(std::exp(-2.0)));

    for (const Fading& f : {Fading::weibull(2.5, 1.0), Fading::lognormal(0.0, 0.7)}) {
        CHECK(f.laplace(0.0) == doctest::Approx(1.0));
        double prev = 1.0, prev_slope = -1e300;
        for (double xi = 0.25; xi <= 4.0; xi += 0.25) {
            const double v = f.laplace(xi);
            CHECK(v <= prev);
            const double slope = (v - prev) / 0.25;
            CHECK(slope >= prev_slope - 1e-9);
            prev = v;
            prev_slope = slope;
        }
    }
}

TEST_CASE("fading samplers have the right mean")
{
    RandomStream rng(11, 0);
    const Fading w = Fading::weibull(1.5, 2.0);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = w.sample(rng);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - w.mean()) < 4 * se);
}

TEST_CASE("noise laws")
{
    CHECK(Noise::zero().laplace_neg(5.0) == ExtendedReal::finite(1.0));
    CHECK(Noise::exponential(2.0).laplace_neg(1.0).value() == doctest::Approx(2.0));
    CHECK(Noise::exponential(2.0).laplace_neg(2.0).is_infinite());
    CHECK(Noise::exponential(2.0).laplace_neg(3.0).is_infinite());
    CHECK(Noise::exponential(2.0).laplace(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(Noise::constant(0.5).laplace_neg(2.0).value() == doctest::Approx(std::numbers::e));
    CHECK(Noise::constant(2.0).log_laplace(1e4) == doctest::Approx(-2e4));
    CHECK(Noise::constant(0.0).is_null());

    // Monte-Carlo cross-check of E[e^{sW}] for exponential noise.
    RandomStream rng(3, 1);
    const Noise n = Noise::exponential(2.0);
    double acc = 0.0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i)
        acc += std::exp(0.5 * n.sample(rng));
    CHECK(acc / draws == doctest::Approx(2.0 / 1.5).epsilon(5e-3));
}
