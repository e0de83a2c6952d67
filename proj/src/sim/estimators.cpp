#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "manet/quadrature.hpp"
#include "manet/sim.hpp"

namespace manet::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Runs f(i) for i in [0, n); results land at their index, so the outcome
/// does not depend on the number of workers. The lowest-index failure wins.
template<class F>
void parallel_for(std::size_t n, unsigned threads, const F& f)
{
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::size_t> error_index(threads, n);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += threads) {
                    try {
                        f(i);
                    } catch (...) {
                        errors[t] = std::current_exception();
                        error_index[t] = i;
                        return;
                    }
                }
            });
        }
    }
    std::size_t first = n;
    std::exception_ptr err;
    for (unsigned t = 0; t < threads; ++t) {
        if (errors[t] && error_index[t] < first) {
            first = error_index[t];
            err = errors[t];
        }
    }
    if (err)
        std::rethrow_exception(err);
}

void require_samples(std::size_t n)
{
    if (n < 100)
        throw DomainError("at least 100 Palm samples are required for meaningful error bars");
}

double window_for(const ScenarioConfig& cfg, const RunOptions& opt)
{
    return opt.window_radius ? *opt.window_radius : default_window_radius(cfg);
}

struct Moments
{
    double mean = 0.0;
    double std_error = 0.0;
};

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    if (xs.empty())
        return m;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (!std::isfinite(m.mean)) {
        m.std_error = kInf;
        return m;
    }
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m.mean) * (x - m.mean);
    const double n = static_cast<double>(xs.size());
    m.std_error = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return m;
}

/// log pi_c(S) for each Palm sample at the configured threshold.
std::vector<double> log_success_probs(const ScenarioConfig& cfg, std::size_t n, const RunOptions& opt,
                                      double window)
{
    std::vector<double> out(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const PalmSample s = sample_palm(cfg, window, rng, false);
        out[i] = log_conditional_success_prob(s, cfg, cfg.T);
    });
    return out;
}

double inverse_from_log(double log_pi)
{
    return log_pi == -kInf ? kInf : std::exp(-log_pi);
}

void finish(DelayEstimate& est, const std::vector<double>& terms)
{
    const Moments m = moments(terms);
    est.mean = m.mean;
    est.std_error = m.std_error;
    est.diagnostic = divergence_diagnostic(terms);
    est.diverged = est.diagnostic.verdict == Convergence::Diverged;
}

} // namespace

std::string to_string(Estimator e)
{
    return e == Estimator::SemiAnalytic ? "semi_analytic" : "slot_empirical";
}

DelayEstimate estimate_mean_delay(const ScenarioConfig& cfg, std::size_t n_samples, Estimator estimator,
                                  const RunOptions& opt)
{
    require_samples(n_samples);
    DelayEstimate est;
    est.estimator = estimator;
    est.n_samples = n_samples;
    est.window_radius = window_for(cfg, opt);

    if (estimator == Estimator::SemiAnalytic) {
        const std::vector<double> logs = log_success_probs(cfg, n_samples, opt, est.window_radius);
        std::vector<double> terms(n_samples);
        double pi_sum = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            terms[i] = inverse_from_log(logs[i]);
            pi_sum += std::exp(logs[i]);
        }
        est.mean_success_prob = pi_sum / static_cast<double>(n_samples);
        finish(est, terms);
        return est;
    }

    std::vector<LocalDelay> runs(n_samples);
    parallel_for(n_samples, opt.threads, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const PalmSample s = sample_palm(cfg, est.window_radius, rng, false);
        runs[i] = local_delay(s, cfg, opt.max_slots, rng);
    });
    std::vector<double> all(n_samples);
    std::vector<double> uncensored;
    uncensored.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        all[i] = static_cast<double>(runs[i].slots);
        if (runs[i].censored)
            ++est.censored;
        else
            uncensored.push_back(all[i]);
    }
    est.censored_biased = static_cast<double>(est.censored) > 1e-3 * static_cast<double>(n_samples);
    const Moments m = moments(uncensored);
    est.mean = m.mean;
    est.std_error = m.std_error;
    // Censored runs enter the tail diagnostic as lower bounds.
    est.diagnostic = divergence_diagnostic(all);
    est.diverged = est.diagnostic.verdict == Convergence::Diverged;
    return est;
}

std::vector<CcdfPoint> estimate_delay_ccdf(const ScenarioConfig& cfg, std::span<const double> m_grid,
                                           std::size_t n_samples, const RunOptions& opt)
{
    require_samples(n_samples);
    for (double m : m_grid) {
        if (!(m >= 0.0))
            throw DomainError("CCDF grid values must be >= 0");
    }
    const std::vector<double> logs = log_success_probs(cfg, n_samples, opt, window_for(cfg, opt));
    std::vector<double> pis(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        pis[i] = std::exp(logs[i]);

    std::vector<CcdfPoint> out;
    std::vector<double> tail(n_samples);
    std::vector<double> sums(n_samples);
    for (double m : m_grid) {
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double pi = pis[i];
            // (1 - pi)^m and sum_{k=1}^m (1 - pi)^k without cancellation.
            const double log_q = std::log1p(-pi);
            tail[i] = m == 0.0 ? 1.0 : std::exp(m * log_q);
            if (pi == 0.0)
                sums[i] = m;
            else if (pi == 1.0)
                sums[i] = 0.0;
            else
                sums[i] = (1.0 - pi) * -std::expm1(m * log_q) / pi;
        }
        const Moments c = moments(tail);
        const Moments s = moments(sums);
        CcdfPoint pt;
        pt.m = m;
        pt.ccdf = c.mean;
        pt.lo = std::max(0.0, c.mean - 1.96 * c.std_error);
        pt.hi = std::min(1.0, c.mean + 1.96 * c.std_error);
        pt.partial_sum = s.mean;
        pt.partial_sum_stderr = s.std_error;
        out.push_back(pt);
    }
    return out;
}

DelayEstimate estimate_shannon_delay(const ScenarioConfig& cfg, std::size_t n_samples, const RunOptions& opt)
{
    require_samples(n_samples);
    if (cfg.fading.kind() != Fading::Kind::Rayleigh || cfg.variability.fading != TimeScale::Fast)
        throw UnsupportedModel("Shannon delay estimation needs fast Rayleigh fading");
    DelayEstimate est;
    est.estimator = Estimator::SemiAnalytic;
    est.n_samples = n_samples;
    est.window_radius = window_for(cfg, opt);
    const bool present = cfg.interference == InterferenceMode::Present;

    std::vector<double> terms(n_samples);
    parallel_for(n_samples, opt.threads, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const PalmSample s = sample_palm(cfg, est.window_radius, rng, false);
        const bool noiseless = s.marks.noise ? *s.marks.noise == 0.0 : cfg.noise.is_null();
        double floor = 0.0;
        if (noiseless && !(present && cfg.mobility == Mobility::Resampled)) {
            std::size_t interferers = 0;
            if (present)
                interferers = s.nodes.size() - 1 - (s.receiver_node ? 1 : 0);
            if (interferers == 0)
                throw DomainError("degenerate Shannon sample: no noise and no interferers, so the rate integral "
                                  "diverges and the delay is 0");
            const double q = 1.0 - cfg.p;
            floor = cfg.p * std::pow(q, static_cast<double>(interferers) + (s.receiver_node ? 1.0 : 0.0));
        }
        const auto f = [&](double v) {
            const double pi = conditional_success_prob(s, cfg, v);
            return std::max(0.0, pi - floor) / (v + 1.0);
        };
        quad::Options qo;
        qo.rel_tol = 1e-8;
        const quad::Result r = quad::integrate_to_infinity(f, 0.0, 1.0, qo);
        if (!r.converged || !(r.value > 0.0))
            throw NumericError("Shannon rate integral did not converge for sample " + std::to_string(i));
        terms[i] = 1.0 / r.value;
    });
    finish(est, terms);
    return est;
}

} // namespace manet::sim
