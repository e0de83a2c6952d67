#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "manet/analytic.hpp"

using namespace manet;
using namespace manet::analytic;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

namespace {

ScenarioConfig base(ReceiverModel rx)
{
    ScenarioConfig c;
    c.lambda = 1;
    c.p = 0.5;
    c.T = 1;
    c.receiver = rx;
    return c;
}

// 2 pi lambda int_0^inf p s v / (v^beta + (1-p) s) dv by Boost's exp_sinh.
double inr_exponent_oracle(double s, double lambda, double p, double beta)
{
    boost::math::quadrature::exp_sinh<double> es;
    const auto f = [&](double v) { return p * s * v / (std::pow(v, beta) + (1 - p) * s); };
    return 2 * kPi * lambda * es.integrate(f, 1e-13);
}

} // namespace

TEST_CASE("K(beta) and theta")
{
    CHECK(k_beta(4) == Approx(kPi * kPi / 2).epsilon(1e-14));
    CHECK(k_beta(3) == Approx(7.59762501035207516).epsilon(1e-13));
    CHECK(k_beta(6) == Approx(3.79881250517603758).epsilon(1e-13));
    CHECK(k_beta(2.01) > 100 * k_beta(4));
    CHECK_THROWS_AS(k_beta(2.0), DomainError);
    for (double b = 2.05; b <= 10.0; b += 0.05) {
        const double g = 2 * kPi / b * boost::math::tgamma(2 / b) * boost::math::tgamma(1 - 2 / b);
        CHECK(k_beta(b) == Approx(g).epsilon(1e-10));
    }

    CHECK(theta(0, 1, 4).value() == 0.0);
    CHECK(theta(0.5, 1, 4).value() == Approx(3.48943209981944000).epsilon(1e-13));
    CHECK(theta(0.6, 1, 4).value() > theta(0.5, 1, 4).value());
    CHECK(theta(0.5, 2, 4).value() > theta(0.5, 1, 4).value());
    CHECK(theta(1, 1, 4).is_infinite());
}

TEST_CASE("noise factors")
{
    CHECK(noise_factor(3, Noise::zero(), TimeScale::Slow).value() == 1.0);
    CHECK(noise_factor(0, Noise::exponential(2), TimeScale::Slow).value() == 1.0);
    CHECK(noise_factor(1, Noise::exponential(2), TimeScale::Slow).value() == Approx(2.0));
    CHECK(noise_factor(2, Noise::exponential(2), TimeScale::Slow).is_infinite());
    CHECK(noise_factor(1, Noise::exponential(2), TimeScale::Fast).value() == Approx(1.5));
    CHECK(noise_factor(2, Noise::constant(0.5), TimeScale::Fast).value() == Approx(std::numbers::e));
}

TEST_CASE("INR interference factor: closed form, generic quadrature and an external oracle")
{
    const PathLoss pl = PathLoss::power_law(1, 4);
    CHECK(interference_factor_inr(0, 1, 0.5, pl).value() == 1.0);
    CHECK(interference_factor_inr(1, 1, 0.0, pl).value() == 1.0);
    const double s = std::pow(0.25, 4);
    const auto closed = interference_exponent_inr(s, 1, 0.5, pl, Evaluation::ClosedForm);
    const auto quadr = interference_exponent_inr(s, 1, 0.5, pl, Evaluation::Quadrature);
    CHECK(closed.method == Method::ClosedForm);
    CHECK(quadr.method == Method::Quadrature);
    CHECK(closed.log_value.value() == Approx(0.218089506238715).epsilon(1e-12));
    CHECK(quadr.log_value.value() == Approx(closed.log_value.value()).epsilon(1e-9));
    CHECK(closed.log_value.value() == Approx(inr_exponent_oracle(s, 1, 0.5, 4)).epsilon(1e-9));
    CHECK(interference_factor_inr(s, 1, 0.5, pl).value() == Approx(1.24369838140156384).epsilon(1e-9));

    // Pole-free variants, reference values from 25-digit quadrature split at the kinks.
    const std::pair<PathLoss, double> pole_free[] = {{PathLoss::max_one(1, 4), 1.735982265411786690},
                                                     {PathLoss::shifted(1.5, 3), 0.4305503057100947452},
                                                     {PathLoss::truncated(1, 4, 0.7), 1.952059464401711545}};
    for (const auto& [l, want] : pole_free)
        CHECK(interference_exponent_inr(2.0, 0.8, 0.3, l).log_value.value() == Approx(want).epsilon(1e-9));
}

TEST_CASE("H and J integrals")
{
    CHECK(h_integral(0, 3, 2) == Approx(kPi / 2).epsilon(1e-10));
    CHECK(h_integral(1, 1, 2) == Approx(kPi / 4).epsilon(1e-10));
    CHECK(h_integral(50, 1, 2) < 1e-3);
    CHECK(h_integral(1, 1, 2) <= h_integral(0.5, 1, 2));
    CHECK(j_integral(1, 2) == Approx(2.12022583928269400).epsilon(1e-8));
    CHECK(j_integral(0.5, 2) == Approx(1.80909555905342613).epsilon(1e-8));
    CHECK(j_integral(0.5, 1.5) == Approx(4.10824629854628704).epsilon(1e-8));
    CHECK(j_integral(1, 2) < kPi * kPi / 2);
    CHECK_THROWS_AS(h_integral(1, 1, 1.0), DomainError);
}

TEST_CASE("MNN interference factor")
{
    const PathLoss pl = PathLoss::power_law(1, 4);
    const double r = 0.25, s = std::pow(r, 4);
    const double closed = interference_factor_mnn(r, s, 1, 0.5, pl, Evaluation::ClosedForm).value();
    const double quadr = interference_factor_mnn(r, s, 1, 0.5, pl, Evaluation::Quadrature).value();
    CHECK(closed == Approx(1.16069677735293403).epsilon(1e-9));
    CHECK(quadr == Approx(closed).epsilon(1e-8));
    const double inr = interference_factor_inr(s, 1, 0.5, pl).value();
    CHECK(closed >= std::sqrt(inr));
    CHECK(closed <= inr);
    CHECK(interference_factor_mnn(r, 0, 1, 0.5, pl).value() == 1.0);
}

TEST_CASE("bipolar mean delay")
{
    ScenarioConfig c = base(BipolarReceiver{0.25});
    const auto d = mean_delay_bipolar(c);
    CHECK(d.method == Method::ClosedForm);
    CHECK(d.value.value() == Approx(2.48739676280313).epsilon(1e-12));
    CHECK(mean_delay_bipolar(c, Evaluation::Quadrature).value.value() == Approx(d.value.value()).epsilon(1e-9));

    c.noise = Noise::exponential(2);
    c.variability.noise = TimeScale::Slow;
    c.receiver = BipolarReceiver{1.0};
    CHECK(mean_delay_bipolar(c).value.is_finite());
    c.receiver = BipolarReceiver{1.5};
    CHECK(mean_delay_bipolar(c).value.is_infinite());

    // Everyone transmits: the power law's pole makes the delay infinite, a bounded law tends to 1 as T -> 0.
    ScenarioConfig all = base(BipolarReceiver{1.0});
    all.p = 1;
    all.T = 1e-9;
    CHECK(mean_delay_bipolar(all).value.is_infinite());
    all.pathloss = PathLoss::max_one(1, 4);
    CHECK(mean_delay_bipolar(all).value.value() == Approx(1.0).epsilon(1e-6));

    ScenarioConfig slow = base(BipolarReceiver{1.0});
    slow.variability.fading = TimeScale::Slow;
    CHECK_THROWS_AS(mean_delay_bipolar(slow), UnsupportedModel);
}

TEST_CASE("IPNR mean delay")
{
    ScenarioConfig c = base(IpnrReceiver{2});
    const auto d = mean_delay_ipnr(c);
    CHECK(d.value.value() == Approx(4.49802458615637672).epsilon(1e-12));
    CHECK(mean_delay_ipnr(c, Evaluation::Quadrature).value.value() == Approx(d.value.value()).epsilon(1e-6));
    c.receiver = IpnrReceiver{1};
    CHECK(mean_delay_ipnr(c).value.is_infinite());
    c.receiver = IpnrReceiver{2};
    c.p = 0;
    CHECK(mean_delay_ipnr(c).value.is_infinite());

    // Nondecreasing in T and in lambda.
    ScenarioConfig m = base(IpnrReceiver{3});
    double prev = 0;
    for (double T : {0.2, 0.5, 1.0, 2.0}) {
        m.T = T;
        const double v = mean_delay_ipnr(m).value.value();
        CHECK(v >= prev);
        prev = v;
    }
    m.T = 1;
    prev = 0;
    for (double lam : {0.2, 0.6, 1.0, 1.5}) {
        m.lambda = lam;
        const double v = mean_delay_ipnr(m).value.value();
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("MNN mean delay")
{
    ScenarioConfig c = base(MnnReceiver{});
    c.T = 0.2;
    const auto d = mean_delay_mnn(c);
    CHECK(d.value.value() == Approx(mean_delay_mnn(c, Evaluation::Quadrature).value.value()).epsilon(1e-6));

    // Sandwich between the delays with D_INR and sqrt(D_INR) in place of D_MNN.
    const double th = theta(c.p, c.T, 4).value();
    const double pre = 1 / (c.p * (1 - c.p));
    const double upper = pre * kPi / (kPi - th);
    const double lower = pre * kPi / (kPi - th / 2);
    CHECK(d.value.value() <= upper);
    CHECK(d.value.value() >= lower);

    c.T = 1e-9;
    CHECK(mean_delay_mnn(c).value.value() == Approx(4.0).epsilon(1e-4));
    c.T = 10;
    CHECK(mean_delay_mnn(c).value.is_infinite());
    c.p = 1;
    c.T = 0.2;
    CHECK(mean_delay_mnn(c).value.is_infinite());
}

TEST_CASE("noise-limited delays")
{
    ScenarioConfig c = base(IpnrReceiver{1});
    c.interference = InterferenceMode::Cancelled;
    CHECK(mean_delay_noise_limited(c).value.value() == Approx(2.0));

    c.noise = Noise::constant(1);
    CHECK(mean_delay_noise_limited(c).value.is_infinite());

    c.fading = Fading::weibull(0.4, 1);
    const auto w = mean_delay_noise_limited(c);
    CHECK(w.value.value() == Approx(3.06010638341723343).epsilon(1e-7));

    c.fading = Fading::weibull(0.6, 1);
    CHECK(mean_delay_noise_limited(c).value.is_infinite());
}

TEST_CASE("high mobility")
{
    ScenarioConfig c = base(IpnrReceiver{2});
    c.mobility = Mobility::Resampled;
    const double hm = mean_delay_high_mobility_ipnr(c).value.value();
    const double q = mean_delay_high_mobility_ipnr(c, Evaluation::Quadrature).value.value();
    CHECK(hm == Approx(q).epsilon(1e-6));
    CHECK(hm <= mean_delay_ipnr(base(IpnrReceiver{2})).value.value());

    c.receiver = IpnrReceiver{1};
    CHECK(mean_delay_ipnr(base(IpnrReceiver{1})).value.is_infinite());
    CHECK(mean_delay_high_mobility_ipnr(c).value.is_finite());
    c.p = 0;
    CHECK(mean_delay_high_mobility_ipnr(c).value.is_infinite());
}

TEST_CASE("bounded receiver distance")
{
    const double lambda0 = 2;
    ScenarioConfig c = base(PoissonPlusGridReceiver{lambda0, 100 / std::sqrt(lambda0)});
    CHECK(mean_delay_bounded_receiver(c).value.value() ==
          Approx(mean_delay_ipnr(base(IpnrReceiver{lambda0})).value.value()).epsilon(1e-4));

    c.receiver = PoissonPlusGridReceiver{1, 0.01};
    CHECK(mean_delay_bounded_receiver(c).value.value() == Approx(2.0).epsilon(1e-3));

    c.receiver = PoissonPlusGridReceiver{1, 1.0};
    c.interference = InterferenceMode::Cancelled;
    c.noise = Noise::constant(1);
    CHECK(mean_delay_bounded_receiver(c).value.is_finite());

    // The distance law is a probability law on [0, kappa].
    const double kappa = 0.8;
    CHECK(bounded_receiver_survival(0, 1, kappa) == Approx(1.0));
    CHECK(bounded_receiver_survival(kappa, 1, kappa) == Approx(0.0).epsilon(1e-12));
    boost::math::quadrature::gauss_kronrod<double, 31> gk;
    const double h0 = kappa / std::sqrt(2.0);
    const auto dens = [&](double r) { return bounded_receiver_density(r, 1, kappa); };
    const double mass = gk.integrate(dens, 0.0, h0, 15, 1e-12) + gk.integrate(dens, h0, kappa, 15, 1e-12);
    CHECK(mass == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("every finite delay is at least 1/p")
{
    for (double p : {0.1, 0.4, 0.8}) {
        ScenarioConfig c = base(IpnrReceiver{5});
        c.p = p;
        const auto d = mean_delay(c);
        if (d.value.is_finite())
            CHECK(d.value.value() >= 1 / p);
        c.receiver = BipolarReceiver{0.5};
        CHECK(mean_delay(c).value.value() >= 1 / p);
    }
}

TEST_CASE("phase classification")
{
    auto v = phase_classify(base(IpnrReceiver{2}));
    CHECK(v.verdict == Verdict::Finite);
    CHECK(v.threshold_lhs == Approx(3.48943209981944));
    CHECK(v.threshold_rhs == Approx(2 * kPi));
    CHECK(phase_classify(base(IpnrReceiver{1})).verdict == Verdict::Infinite);

    const double boundary = theta(0.5, 1, 4).value() / kPi;
    CHECK(phase_classify(base(IpnrReceiver{boundary * (1 + 1e-3)})).verdict == Verdict::Finite);
    CHECK(phase_classify(base(IpnrReceiver{boundary * (1 - 1e-3)})).verdict == Verdict::Infinite);

    ScenarioConfig b = base(BipolarReceiver{1.0});
    b.noise = Noise::exponential(2);
    b.variability.noise = TimeScale::Slow;
    CHECK(phase_classify(b).verdict == Verdict::Finite);
    b.receiver = BipolarReceiver{1.5};
    CHECK(phase_classify(b).verdict == Verdict::Infinite);
    b.noise = Noise::exponential(16);
    b.receiver = BipolarReceiver{2.0};
    CHECK(phase_classify(b).verdict == Verdict::Infinite); // exactly on the threshold

    ScenarioConfig m = base(MnnReceiver{});
    m.T = 0.2;
    CHECK(phase_classify(m, MnnRule::Bounds).verdict == Verdict::Finite);
    m.T = 2.0; // theta = 4.93 lies in [pi, 2 pi]
    CHECK(phase_classify(m, MnnRule::Bounds).verdict == Verdict::Indeterminate);
    m.T = 10.0;
    CHECK(phase_classify(m, MnnRule::Bounds).verdict == Verdict::Infinite);
    CHECK(phase_classify(m).verdict == Verdict::Infinite);

    ScenarioConfig pf = base(IpnrReceiver{1.5});
    pf.pathloss = PathLoss::max_one(1, 4);
    CHECK(phase_classify(pf).verdict == Verdict::Finite);
    pf.receiver = IpnrReceiver{1.0};
    CHECK(phase_classify(pf).verdict == Verdict::Infinite);

    ScenarioConfig sl = base(BipolarReceiver{1.0});
    sl.variability = {TimeScale::Slow, TimeScale::Slow};
    sl.noise = Noise::constant(0.1);
    CHECK(phase_classify(sl).verdict == Verdict::Infinite);
}

TEST_CASE("Shannon delay without interference")
{
    const double want = 1 / (std::exp(1.0) * boost::math::expint(1, 1.0));
    CHECK(shannon_delay_from_snr_scale(1, 1).value.value() == Approx(want).epsilon(1e-12));
    CHECK(shannon_delay_from_snr_scale(1, 0.5).value.value() == Approx(2 * want).epsilon(1e-12));
    CHECK(shannon_delay_from_snr_scale(1e-8, 1).value.value() < 0.06);
    for (double a : {0.01, 3.0, 80.0, 600.0, 5000.0}) {
        const double e1 = a < 700 ? std::exp(a) * boost::math::expint(1, a) : 1 / a * (1 - 1 / a + 2 / (a * a));
        CHECK(shannon_delay_from_snr_scale(a, 1).value.value() == Approx(1 / e1).epsilon(1e-7));
    }
    CHECK_THROWS_AS(mean_shannon_delay_interference_free(1, 1, 0, 1, PathLoss::power_law(1, 4)), DomainError);
}
