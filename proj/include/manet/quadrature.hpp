#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals.
//
// Finite intervals use a global-adaptive G7/K15 scheme (QUADPACK qag error
// model). Semi-infinite intervals [a, inf) integrate [a, a + scale] directly
// and the remainder through the substitution v = a + scale * e^x in unit
// chunks of x, so algebraic tails v^-q become geometric in the chunk index and
// Gaussian tails vanish after a few chunks. The geometric remainder beyond the
// last chunk is added analytically.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace manet::quad {

struct Result
{
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

struct Options
{
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 2000;
    /// Semi-infinite only: maximal number of unit chunks in x.
    int max_chunks = 300;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace detail

/// Single 15-point Kronrod panel with embedded 7-point Gauss error estimate.
template<class F>
Result gauss_kronrod_15(const F& f, double a, double b)
{
    using namespace detail;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double fc = f(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    Result r;
    r.value = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps))
        err = std::max(eps * 50.0 * resabs, err);
    r.abs_error = err;
    r.evaluations = 15;
    r.converged = std::isfinite(r.value);
    return r;
}

/// Global-adaptive integration of f over [a, b].
template<class F>
Result integrate(const F& f, double a, double b, const Options& opt = {})
{
    if (a == b)
        return {};
    if (b < a) {
        Result r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }

    std::priority_queue<detail::Panel> heap;
    Result first = gauss_kronrod_15(f, a, b);
    Result total{first.value, first.abs_error, first.evaluations, true};
    if (!std::isfinite(first.value)) {
        total.converged = false;
        return total;
    }
    heap.push({a, b, first.value, first.abs_error});

    int intervals = 1;
    while (total.abs_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total.value))) {
        if (intervals >= opt.max_intervals) {
            total.converged = false;
            break;
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval collapsed to machine resolution.
            total.converged = false;
            break;
        }
        heap.pop();
        const Result left = gauss_kronrod_15(f, worst.a, mid);
        const Result right = gauss_kronrod_15(f, mid, worst.b);
        total.evaluations += left.evaluations + right.evaluations;
        if (!std::isfinite(left.value) || !std::isfinite(right.value)) {
            total.value = std::numeric_limits<double>::quiet_NaN();
            total.converged = false;
            return total;
        }
        total.value += left.value + right.value - worst.value;
        total.abs_error += left.abs_error + right.abs_error - worst.error;
        heap.push({worst.a, mid, left.value, left.abs_error});
        heap.push({mid, worst.b, right.value, right.abs_error});
        ++intervals;
    }

    // Re-sum to remove drift from the incremental updates.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    total.value = value;
    total.abs_error = error;
    return total;
}

/// Integral of f over [a, inf). `scale` sets where the change of variables
/// starts; pick it near the integrand's natural length scale.
template<class F>
Result integrate_to_infinity(const F& f, double a, double scale, const Options& opt = {})
{
    Result total = integrate(f, a, a + scale, opt);
    if (!std::isfinite(total.value)) {
        total.converged = false;
        return total;
    }

    const auto mapped = [&](double x) {
        const double ex = std::exp(x);
        const double v = a + scale * ex;
        if (!std::isfinite(v))
            return 0.0;
        return f(v) * scale * ex;
    };

    double prev = std::numeric_limits<double>::infinity();
    int small_run = 0;
    bool done = false;
    for (int k = 0; k < opt.max_chunks; ++k) {
        Options chunk_opt = opt;
        chunk_opt.abs_tol = std::max(opt.abs_tol, 0.01 * opt.rel_tol * std::abs(total.value));
        const Result c = integrate(mapped, double(k), double(k + 1), chunk_opt);
        total.evaluations += c.evaluations;
        total.converged = total.converged && c.converged;
        if (!std::isfinite(c.value)) {
            total.value = c.value;
            total.converged = false;
            return total;
        }
        total.value += c.value;
        total.abs_error += c.abs_error;

        const double mag = std::abs(c.value);
        const double q = (prev > 0.0 && std::isfinite(prev)) ? mag / prev : 1.0;
        const double remainder = q < 1.0 ? mag * q / (1.0 - q) : std::numeric_limits<double>::infinity();
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total.value));
        if (mag == 0.0 || (q < 1.0 && remainder <= 0.1 * target))
            ++small_run;
        else
            small_run = 0;
        prev = mag;
        if (small_run >= 3) {
            if (std::isfinite(remainder) && c.value != 0.0) {
                total.value += std::copysign(remainder, c.value);
                total.abs_error += 0.5 * remainder;
            }
            done = true;
            break;
        }
    }
    if (!done)
        total.converged = false;
    return total;
}

} // namespace manet::quad
