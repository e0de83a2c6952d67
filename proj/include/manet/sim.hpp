#pragma once

// Monte-Carlo engine for the typical node of a Poisson MANET under the Palm
// distribution: sampling, conditional success probabilities, slot dynamics
// and the delay estimators built on them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/extended_real.hpp"
#include "manet/rng.hpp"
#include "manet/scenario.hpp"

namespace manet::sim {

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Channel marks frozen for the lifetime of a sample (slow variability).
struct StaticMarks
{
    std::vector<double> fading;  ///< per node, toward node 0's receiver; empty for fast fading
    std::optional<double> noise; ///< at node 0's receiver; empty for fast noise
};

struct PalmSample
{
    double window_radius = 0.0;
    std::vector<Point> nodes;     ///< node 0 is the typical node at the origin
    std::vector<Point> receivers; ///< receivers[0] always set; others only when requested
    StaticMarks marks;
    /// MNN only: index of the node serving as node 0's receiver.
    std::optional<std::size_t> receiver_node;

    double link_distance() const { return distance(nodes.front(), receivers.front()); }
};

/// Radius beyond which the expected truncated interference at node 0's
/// receiver is below 1e-3 of the signal-to-threshold level.
double guard_radius(const ScenarioConfig& cfg);

/// max(10, 5 x guard radius).
double default_window_radius(const ScenarioConfig& cfg);

/// Draws a Palm sample on the disk of radius `window_radius` around the
/// origin. For IPNR and MNN the window is doubled (at most 6 times) when no
/// candidate receiver exists. With `all_receivers` false only node 0's
/// receiver is assigned.
PalmSample sample_palm(const ScenarioConfig& cfg, double window_radius, RandomStream& rng,
                       bool all_receivers = true);

/// pi_c(S) at threshold `threshold` for fast Rayleigh fading, plus the
/// noise-limited case (interference cancelled, constant or frozen noise) for
/// any fast fading law. Throws UnsupportedModel otherwise.
double conditional_success_prob(const PalmSample& sample, const ScenarioConfig& cfg, double threshold);
/// log pi_c(S); -inf when pi_c(S) = 0.
double log_conditional_success_prob(const PalmSample& sample, const ScenarioConfig& cfg, double threshold);

struct SlotOutcome
{
    std::uint64_t slot = 0;
    bool transmitted = false;
    bool success = false;
    ExtendedReal sinr; ///< meaningful when transmitted; infinite without noise and interference
};

/// Simulates `max_slots` slots for node 0.
std::vector<SlotOutcome> run_slots(const PalmSample& sample, const ScenarioConfig& cfg, std::uint64_t max_slots,
                                   RandomStream& rng);

struct LocalDelay
{
    std::uint64_t slots = 0; ///< first success; max_slots when censored
    bool censored = false;
};

LocalDelay local_delay(const PalmSample& sample, const ScenarioConfig& cfg, std::uint64_t max_slots,
                       RandomStream& rng);

// --- diagnostics -----------------------------------------------------------

enum class Convergence { Converged, Diverged, Inconclusive };

std::string to_string(Convergence c);

struct Checkpoint
{
    std::size_t n = 0;
    double running_mean = 0.0;
};

struct DivergenceReport
{
    Convergence verdict = Convergence::Inconclusive;
    std::vector<Checkpoint> checkpoints; ///< at n, 2n, 4n, 8n
    std::vector<double> growth;          ///< ratios of consecutive checkpoint means
    double max_share = 0.0;              ///< largest single term over the total
    bool growth_rule = false;            ///< growth > 1.25 twice and max_share > 0.5
    double tail_index = 0.0;             ///< Hill estimate of the terms' tail index
    double tail_index_upper = 0.0;       ///< Hill estimate + 2 standard errors
    bool tail_rule = false;              ///< tail_index_upper < 1
};

/// Classifies a series of i.i.d. positive terms whose mean may not exist.
/// Fewer than 8 terms give Inconclusive.
DivergenceReport divergence_diagnostic(std::span<const double> terms);

// --- estimators ------------------------------------------------------------

enum class Estimator { SemiAnalytic, SlotEmpirical };

std::string to_string(Estimator e);

struct RunOptions
{
    std::uint64_t seed = 0;
    std::optional<double> window_radius; ///< default_window_radius(cfg) when empty
    std::uint64_t max_slots = 100000;    ///< SlotEmpirical horizon
    unsigned threads = 1;
};

struct DelayEstimate
{
    double mean = 0.0; ///< running mean at n_samples; may be +inf
    double std_error = 0.0;
    std::size_t n_samples = 0;
    bool diverged = false;
    DivergenceReport diagnostic;
    Estimator estimator = Estimator::SemiAnalytic;
    double window_radius = 0.0;
    std::size_t censored = 0;    ///< SlotEmpirical runs that hit max_slots
    bool censored_biased = false; ///< more than 0.1% of runs censored
    /// Mean of pi_c over the samples (SemiAnalytic only).
    double mean_success_prob = 0.0;
};

/// E0[L] by Palm replication. SemiAnalytic averages 1/pi_c(S); SlotEmpirical
/// averages simulated local delays. Refuses fewer than 100 samples.
DelayEstimate estimate_mean_delay(const ScenarioConfig& cfg, std::size_t n_samples, Estimator estimator,
                                  const RunOptions& opt = {});

struct CcdfPoint
{
    double m = 0.0;
    double ccdf = 0.0; ///< P0{L > m}
    double lo = 0.0;   ///< 95% band
    double hi = 0.0;
    double partial_sum = 0.0;        ///< sum_{k=1}^{m} P0{L > k}
    double partial_sum_stderr = 0.0;
};

/// Mixture-of-geometrics CCDF: per sample P{L > m | S} = (1 - pi_c(S))^m.
std::vector<CcdfPoint> estimate_delay_ccdf(const ScenarioConfig& cfg, std::span<const double> m_grid,
                                           std::size_t n_samples, const RunOptions& opt = {});

/// E0[1 / int_0^inf pi_c(v|S) / (v + 1) dv]. The probability floor
/// p(1-p)^N left by a finite window without noise is removed before
/// integrating; a sample with neither noise nor interferers is an error.
DelayEstimate estimate_shannon_delay(const ScenarioConfig& cfg, std::size_t n_samples, const RunOptions& opt = {});

} // namespace manet::sim
