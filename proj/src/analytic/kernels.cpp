#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "manet/analytic.hpp"
#include "manet/quadrature.hpp"

namespace manet::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

quad::Options tight()
{
    quad::Options o;
    o.rel_tol = 1e-11;
    return o;
}

[[noreturn]] void quadrature_failure(const char* what, const quad::Result& r)
{
    std::ostringstream os;
    os << what << ": quadrature did not converge (value " << r.value << ", abs error " << r.abs_error << ", "
       << r.evaluations << " evaluations)";
    throw NumericError(os.str());
}

/// int_L^inf du / (1 + u^b), the incomplete form behind H.
double h_tail(double lower, double b)
{
    if (lower == 0.0)
        return (kPi / b) / std::sin(kPi / b);
    quad::Options opt;
    opt.rel_tol = 1e-10;
    const auto f = [b](double u) { return 1.0 / (1.0 + std::pow(u, b)); };
    const quad::Result r = quad::integrate_to_infinity(f, lower, std::max(1.0, lower), opt);
    if (!r.converged)
        quadrature_failure("H integral", r);
    return r.value;
}

} // namespace

std::string to_string(Method m)
{
    switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::Quadrature: return "quadrature";
    case Method::ThresholdRule: return "threshold_rule";
    }
    return "?";
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

double k_beta(double beta)
{
    if (!(beta > 2.0))
        throw DomainError("K(beta) requires beta > 2 (the shot-noise integral diverges)");
    return 2.0 * kPi * kPi / (beta * std::sin(2.0 * kPi / beta));
}

ExtendedReal theta(double p, double T, double beta)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("theta requires p in [0, 1]");
    if (!(T > 0.0))
        throw DomainError("theta requires T > 0");
    const double kb = k_beta(beta);
    if (p == 1.0)
        return ExtendedReal::infinite();
    return ExtendedReal::finite(p * std::pow(1.0 - p, 2.0 / beta - 1.0) * std::pow(T, 2.0 / beta) * kb);
}

ExtendedReal log_noise_factor(double s, const Noise& noise, TimeScale variability)
{
    if (!(s >= 0.0))
        throw DomainError("noise factor requires s >= 0");
    if (variability == TimeScale::Slow)
        return noise.log_laplace_neg(s);
    return ExtendedReal::finite(-noise.log_laplace(s));
}

ExtendedReal noise_factor(double s, const Noise& noise, TimeScale variability)
{
    return exp_extended(log_noise_factor(s, noise, variability));
}

LogFactor radial_shot_integral(double s, double p, double q, const PathLoss& pl, double lower, Evaluation how)
{
    if (!(s >= 0.0) || !(lower >= 0.0))
        throw DomainError("radial shot integral requires s >= 0 and lower >= 0");
    if (!(pl.beta() > 2.0))
        throw DomainError("shot-noise integrals require beta > 2");
    if (s == 0.0 || p == 0.0)
        return {ExtendedReal::finite(0.0), Method::ClosedForm, 0.0};

    const double A = pl.scale();
    const double beta = pl.beta();
    const double c = q * s;

    if (pl.kind() == PathLoss::Kind::PowerLaw && how != Evaluation::Quadrature) {
        if (c == 0.0) {
            if (lower == 0.0)
                return {ExtendedReal::infinite(), Method::ClosedForm, 0.0};
            const double v = p * s * std::pow(A, -beta) * std::pow(lower, 2.0 - beta) / (beta - 2.0);
            return {ExtendedReal::finite(v), Method::ClosedForm, 0.0};
        }
        const double pref = p * s * std::pow(c, 2.0 / beta - 1.0) / (2.0 * A * A);
        const double L = lower * lower * A * A * std::pow(c, -2.0 / beta);
        const Method m = lower == 0.0 ? Method::ClosedForm : Method::Quadrature;
        return {ExtendedReal::finite(pref * h_tail(L, beta / 2.0)), m, 0.0};
    }
    if (how == Evaluation::ClosedForm)
        throw DomainError("no closed form for the shot-noise integral with path loss " + to_string(pl.kind()));

    if (c == 0.0 && pl.has_pole() && lower == 0.0)
        return {ExtendedReal::infinite(), Method::Quadrature, 0.0};

    const auto f = [&](double v) { return p * s * v / (pl(v) + c); };
    const double natural = std::pow(c > 0.0 ? c : s, 1.0 / beta) / A;
    std::vector<double> points{lower};
    const auto add = [&](double x) {
        if (x > lower)
            points.push_back(x);
    };
    add(natural);
    if (pl.kind() == PathLoss::Kind::MaxOne)
        add(1.0 / A);
    if (pl.kind() == PathLoss::Kind::Truncated)
        add(pl.u0());
    std::sort(points.begin(), points.end());

    double value = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const quad::Result r = quad::integrate(f, points[i], points[i + 1], tight());
        if (!r.converged)
            quadrature_failure("shot-noise integral", r);
        value += r.value;
        err += r.abs_error;
    }
    const double start = points.back();
    const quad::Result tail = quad::integrate_to_infinity(f, start, std::max(start, natural), tight());
    if (!tail.converged)
        quadrature_failure("shot-noise integral tail", tail);
    value += tail.value;
    err += tail.abs_error;
    return {ExtendedReal::finite(value), Method::Quadrature, err};
}

LogFactor interference_exponent_inr(double s, double lambda, double p, const PathLoss& pl, Evaluation how)
{
    LogFactor f = radial_shot_integral(s, p, 1.0 - p, pl, 0.0, how);
    if (f.log_value.is_finite()) {
        const double scale = 2.0 * kPi * lambda;
        f.log_value = ExtendedReal::finite(scale * f.log_value.value());
        f.abs_error *= scale;
    }
    return f;
}

ExtendedReal interference_factor_inr(double s, double lambda, double p, const PathLoss& pl, Evaluation how)
{
    return exp_extended(interference_exponent_inr(s, lambda, p, pl, how).log_value);
}

double h_integral(double a, double w, double b)
{
    if (!(b > 1.0))
        throw DomainError("H(a, w, b) requires b > 1");
    if (!(w > 0.0) || !(a >= 0.0))
        throw DomainError("H(a, w, b) requires a >= 0 and w > 0");
    return h_tail(a * a * std::pow(w, -1.0 / b), b);
}

double j_integral(double w, double b)
{
    if (!(b > 1.0))
        throw DomainError("J(w, b) requires b > 1");
    if (!(w > 0.0))
        throw DomainError("J(w, b) requires w > 0");
    quad::Options opt;
    opt.rel_tol = 1e-9;
    const auto f = [&](double t) { return h_integral(2.0 * std::cos(t), w, b); };
    const quad::Result r = quad::integrate(f, 0.0, kPi / 2.0, opt);
    if (!r.converged)
        quadrature_failure("J integral", r);
    return 2.0 * r.value;
}

LogFactor interference_exponent_mnn(double r, double s, double lambda, double p, const PathLoss& pl, Evaluation how)
{
    if (!(r >= 0.0))
        throw DomainError("MNN interference factor requires r >= 0");
    if (!(s >= 0.0))
        throw DomainError("MNN interference factor requires s >= 0");
    if (s == 0.0 || p == 0.0)
        return {ExtendedReal::finite(0.0), Method::ClosedForm, 0.0};

    const double beta = pl.beta();
    if (pl.kind() == PathLoss::Kind::PowerLaw && how != Evaluation::Quadrature) {
        const double c = (1.0 - p) * s;
        if (c == 0.0)
            return {ExtendedReal::infinite(), Method::ClosedForm, 0.0};
        const double A = pl.scale();
        const double pref = p * s * std::pow(c, 2.0 / beta - 1.0) / (2.0 * A * A);
        const double kb = k_beta(beta);
        // The empty ball contributes J(w_eff, beta/2); w_eff = (1-p)T when s = T l(r).
        const double j = r == 0.0 ? kb : j_integral(c / std::pow(A * r, beta), beta / 2.0);
        return {ExtendedReal::finite(lambda * pref * (kb + j)), r == 0.0 ? Method::ClosedForm : Method::Quadrature,
                0.0};
    }
    if (how == Evaluation::ClosedForm)
        throw DomainError("no closed form for the MNN interference factor with path loss " + to_string(pl.kind()));

    const LogFactor whole = radial_shot_integral(s, p, 1.0 - p, pl, 0.0, Evaluation::Quadrature);
    if (whole.log_value.is_infinite())
        return whole;
    quad::Options opt;
    opt.rel_tol = 1e-9;
    const auto outside_ball = [&](double t) {
        return radial_shot_integral(s, p, 1.0 - p, pl, 2.0 * r * std::cos(t), Evaluation::Quadrature)
            .log_value.value();
    };
    const quad::Result half = quad::integrate(outside_ball, 0.0, kPi / 2.0, opt);
    if (!half.converged)
        quadrature_failure("MNN angular integral", half);
    const double value = lambda * (kPi * whole.log_value.value() + 2.0 * half.value);
    const double err = lambda * (kPi * whole.abs_error + 2.0 * half.abs_error);
    return {ExtendedReal::finite(value), Method::Quadrature, err};
}

ExtendedReal interference_factor_mnn(double r, double s, double lambda, double p, const PathLoss& pl, Evaluation how)
{
    return exp_extended(interference_exponent_mnn(r, s, lambda, p, pl, how).log_value);
}

} // namespace manet::analytic
