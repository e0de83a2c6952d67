#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "manet/analytic.hpp"
#include "manet/sim.hpp"

namespace manet::sim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// l(d) from the squared distance, sparing the square root and pow where possible.
double attenuation_sq(const PathLoss& pl, double d2)
{
    if (pl.kind() == PathLoss::Kind::PowerLaw) {
        const double a2 = pl.scale() * pl.scale() * d2;
        return pl.beta() == 4.0 ? a2 * a2 : std::pow(a2, pl.beta() / 2.0);
    }
    return pl(std::sqrt(d2));
}

/// Whether node j interferes at node 0's receiver (all nodes but 0 and an MNN receiver).
bool interferer(const PalmSample& s, std::size_t j)
{
    return j != 0 && !(s.receiver_node && *s.receiver_node == j);
}

double noise_level(const PalmSample& s, const ScenarioConfig& cfg)
{
    return s.marks.noise ? *s.marks.noise : cfg.noise.level();
}

} // namespace

double log_conditional_success_prob(const PalmSample& s, const ScenarioConfig& cfg, double threshold)
{
    if (!(threshold >= 0.0))
        throw DomainError("success probability needs a threshold >= 0");
    if (cfg.variability.fading == TimeScale::Slow)
        throw UnsupportedModel("conditional success probability needs fast fading; use run_slots");
    if (cfg.p == 0.0)
        return kNegInf;
    const bool present = cfg.interference == InterferenceMode::Present;
    const double lr = cfg.pathloss(s.link_distance());
    double log_pi = std::log(cfg.p);

    if (cfg.fading.kind() != Fading::Kind::Rayleigh) {
        const bool fixed_noise = s.marks.noise || cfg.noise.kind() == Noise::Kind::Zero ||
                                 cfg.noise.kind() == Noise::Kind::Constant;
        if (present || !fixed_noise)
            throw UnsupportedModel("conditional success probability for " + to_string(cfg.fading.kind()) +
                                   " fading needs cancelled interference and constant or slow noise; use "
                                   "run_slots");
        return log_pi + cfg.fading.log_tail(lr * noise_level(s, cfg) * threshold);
    }

    const double xi = cfg.fading.mu() * threshold * lr;
    if (s.marks.noise)
        log_pi -= xi * *s.marks.noise;
    else
        log_pi += cfg.noise.log_laplace(xi);
    if (!present)
        return log_pi;

    if (s.receiver_node) {
        if (cfg.p == 1.0)
            return kNegInf;
        log_pi += std::log1p(-cfg.p);
    }

    if (cfg.mobility == Mobility::Resampled) {
        const auto f = analytic::radial_shot_integral(threshold * lr, cfg.p, 1.0, cfg.pathloss);
        if (f.log_value.is_infinite())
            return kNegInf;
        return log_pi - 2.0 * std::numbers::pi * cfg.lambda * f.log_value.value();
    }

    // Products of up to 32 factors in [1-p, 1] before taking a log.
    const Point y0 = s.receivers.front();
    const double q = 1.0 - cfg.p;
    const double tl = threshold * lr;
    double block = 1.0;
    int in_block = 0;
    for (std::size_t j = 1; j < s.nodes.size(); ++j) {
        if (!interferer(s, j))
            continue;
        const double dx = s.nodes[j].x - y0.x;
        const double dy = s.nodes[j].y - y0.y;
        const double l = attenuation_sq(cfg.pathloss, dx * dx + dy * dy);
        block *= l > 0.0 ? q + cfg.p * l / (l + tl) : q;
        if (++in_block == 32) {
            log_pi += std::log(block);
            block = 1.0;
            in_block = 0;
        }
    }
    return log_pi + std::log(block);
}

double conditional_success_prob(const PalmSample& s, const ScenarioConfig& cfg, double threshold)
{
    return std::exp(log_conditional_success_prob(s, cfg, threshold));
}

namespace {

/// Slot dynamics for node 0 of a fixed sample.
class SlotEngine
{
  public:
    SlotEngine(const PalmSample& s, const ScenarioConfig& cfg) : s_(s), cfg_(cfg)
    {
        signal_gain_ = 1.0 / cfg.pathloss(s.link_distance());
        present_ = cfg.interference == InterferenceMode::Present;
        resampled_ = cfg.mobility == Mobility::Resampled;
        const Point y0 = s.receivers.front();
        if (present_ && !resampled_) {
            gain_.reserve(s.nodes.size());
            index_.reserve(s.nodes.size());
            for (std::size_t j = 1; j < s.nodes.size(); ++j) {
                if (!interferer(s, j))
                    continue;
                const double dx = s.nodes[j].x - y0.x;
                const double dy = s.nodes[j].y - y0.y;
                gain_.push_back(1.0 / attenuation_sq(cfg.pathloss, dx * dx + dy * dy));
                index_.push_back(j);
            }
        }
    }

    SlotOutcome step(std::uint64_t n, RandomStream& rng) const
    {
        SlotOutcome out;
        out.slot = n;
        out.transmitted = rng.uniform() < cfg_.p;
        if (!out.transmitted)
            return out;
        // MNN: a transmitting receiver cannot decode.
        const bool receiver_busy = present_ && s_.receiver_node && rng.uniform() < cfg_.p;

        double interference = 0.0;
        if (present_ && resampled_) {
            std::poisson_distribution<std::size_t> count(cfg_.lambda * cfg_.p * std::numbers::pi *
                                                         s_.window_radius * s_.window_radius);
            const std::size_t k = count(rng);
            const Point y0 = s_.receivers.front();
            for (std::size_t i = 0; i < k; ++i) {
                double x = 0.0;
                double y = 0.0;
                do {
                    x = 2.0 * rng.uniform() - 1.0;
                    y = 2.0 * rng.uniform() - 1.0;
                } while (x * x + y * y >= 1.0);
                const double dx = s_.window_radius * x - y0.x;
                const double dy = s_.window_radius * y - y0.y;
                interference += cfg_.fading.sample(rng) / attenuation_sq(cfg_.pathloss, dx * dx + dy * dy);
            }
        } else if (present_) {
            const bool slow = !s_.marks.fading.empty();
            for (std::size_t k = 0; k < gain_.size(); ++k) {
                if (rng.uniform() >= cfg_.p)
                    continue;
                const double f = slow ? s_.marks.fading[index_[k]] : cfg_.fading.sample(rng);
                interference += f * gain_[k];
            }
        }

        const double f0 = s_.marks.fading.empty() ? cfg_.fading.sample(rng) : s_.marks.fading.front();
        const double w = s_.marks.noise ? *s_.marks.noise : cfg_.noise.sample(rng);
        const double denom = w + interference;
        const double signal = f0 * signal_gain_;
        if (denom > 0.0 && std::isfinite(denom)) {
            out.sinr = ExtendedReal::finite(signal / denom);
            out.success = signal / denom >= cfg_.T;
        } else if (denom == 0.0) {
            out.sinr = ExtendedReal::infinite();
            out.success = true;
        } else {
            out.sinr = ExtendedReal::finite(0.0);
        }
        out.success = out.success && !receiver_busy;
        return out;
    }

  private:
    const PalmSample& s_;
    const ScenarioConfig& cfg_;
    double signal_gain_ = 0.0;
    bool present_ = true;
    bool resampled_ = false;
    std::vector<double> gain_;
    std::vector<std::size_t> index_;
};

void check_slots(std::uint64_t max_slots)
{
    if (max_slots < 1)
        throw DomainError("max_slots must be at least 1");
}

} // namespace

std::vector<SlotOutcome> run_slots(const PalmSample& sample, const ScenarioConfig& cfg, std::uint64_t max_slots,
                                   RandomStream& rng)
{
    check_slots(max_slots);
    const SlotEngine engine(sample, cfg);
    std::vector<SlotOutcome> out;
    out.reserve(max_slots);
    for (std::uint64_t n = 1; n <= max_slots; ++n)
        out.push_back(engine.step(n, rng));
    return out;
}

LocalDelay local_delay(const PalmSample& sample, const ScenarioConfig& cfg, std::uint64_t max_slots,
                       RandomStream& rng)
{
    check_slots(max_slots);
    const SlotEngine engine(sample, cfg);
    for (std::uint64_t n = 1; n <= max_slots; ++n) {
        if (engine.step(n, rng).success)
            return {n, false};
    }
    return {max_slots, true};
}

} // namespace manet::sim
