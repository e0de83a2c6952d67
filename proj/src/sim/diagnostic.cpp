#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "manet/sim.hpp"

namespace manet::sim {

std::string to_string(Convergence c)
{
    switch (c) {
    case Convergence::Converged: return "converged";
    case Convergence::Diverged: return "diverged";
    case Convergence::Inconclusive: return "inconclusive";
    }
    return "?";
}

DivergenceReport divergence_diagnostic(std::span<const double> terms)
{
    DivergenceReport rep;
    const std::size_t n = terms.size() / 8;
    if (n == 0)
        return rep;

    if (std::any_of(terms.begin(), terms.end(), [](double t) { return !std::isfinite(t); })) {
        rep.verdict = Convergence::Diverged;
        rep.growth_rule = true;
        rep.max_share = 1.0;
        return rep;
    }

    double sum = 0.0;
    double largest = 0.0;
    std::size_t next = n;
    for (std::size_t i = 0; i < 8 * n; ++i) {
        sum += terms[i];
        largest = std::max(largest, terms[i]);
        if (i + 1 == next) {
            rep.checkpoints.push_back({next, sum / static_cast<double>(next)});
            next *= 2;
        }
    }
    for (std::size_t i = 1; i < rep.checkpoints.size(); ++i)
        rep.growth.push_back(rep.checkpoints[i].running_mean / rep.checkpoints[i - 1].running_mean);
    rep.max_share = sum > 0.0 ? largest / sum : 0.0;
    rep.growth_rule = rep.growth[1] > 1.25 && rep.growth[2] > 1.25 && rep.max_share > 0.5;

    // Hill estimator on the k largest terms.
    const std::size_t total = terms.size();
    const std::size_t k = std::min(std::clamp<std::size_t>(total / 100, 20, 5000), total - 1);
    std::vector<double> top(terms.begin(), terms.end());
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(), std::greater<>());
    const double threshold = top[k];
    double log_excess = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        log_excess += std::log(top[i] / threshold);
    if (threshold > 0.0 && log_excess > 0.0) {
        rep.tail_index = static_cast<double>(k) / log_excess;
        rep.tail_index_upper = rep.tail_index * (1.0 + 2.0 / std::sqrt(static_cast<double>(k)));
    } else {
        rep.tail_index = rep.tail_index_upper = std::numeric_limits<double>::infinity();
    }
    rep.tail_rule = rep.tail_index_upper < 1.0;

    rep.verdict = rep.growth_rule || rep.tail_rule ? Convergence::Diverged : Convergence::Converged;
    return rep;
}

} // namespace manet::sim
