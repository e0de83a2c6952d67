#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include "manet/quadrature.hpp"

using namespace manet;
constexpr double kPi = std::numbers::pi;

TEST_CASE("finite intervals")
{
    const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    const auto f = [](double x) { return std::sqrt(x) * std::log(x + 1e-300); };
    boost::math::quadrature::tanh_sinh<double> ts;
    CHECK(quad::integrate(f, 0.0, 1.0).value == doctest::Approx(ts.integrate(f, 0.0, 1.0)).epsilon(1e-9));
}

TEST_CASE("semi-infinite intervals with algebraic and gaussian tails")
{
    const auto alg = [](double v) { return v / (std::pow(v, 4) + 1.0); };
    auto r = quad::integrate_to_infinity(alg, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(kPi / 4).epsilon(1e-10));

    const auto slow = [](double v) { return 1.0 / (std::pow(v, 2.5) + 1.0); };
    boost::math::quadrature::exp_sinh<double> es;
    r = quad::integrate_to_infinity(slow, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(es.integrate(slow)).epsilon(1e-9));

    const auto gauss = [](double x) { return std::exp(-x * x); };
    r = quad::integrate_to_infinity(gauss, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-12));
}

TEST_CASE("non-integrable tail is reported as unconverged")
{
    const auto r = quad::integrate_to_infinity([](double v) { return 1.0 / (v + 1.0); }, 0.0, 1.0);
    CHECK_FALSE(r.converged);
}
