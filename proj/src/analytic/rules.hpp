#pragma once

// Shared between the delay evaluators and phase_classify.

#include <optional>

#include "manet/analytic.hpp"

namespace manet::analytic::detail {

void require_valid(const ScenarioConfig& cfg);

/// Rule for a single model family. Throws UnsupportedModel when the family
/// does not cover the configuration; nullopt when only numerics can decide
/// (custom noise laws).
std::optional<PhaseVerdict> bipolar_rule(const ScenarioConfig& cfg);
std::optional<PhaseVerdict> ipnr_rule(const ScenarioConfig& cfg);
std::optional<PhaseVerdict> mnn_rule(const ScenarioConfig& cfg, MnnRule rule);
std::optional<PhaseVerdict> noise_limited_rule(const ScenarioConfig& cfg);
std::optional<PhaseVerdict> high_mobility_rule(const ScenarioConfig& cfg);
std::optional<PhaseVerdict> bounded_receiver_rule(const ScenarioConfig& cfg);

/// P(F > l(r) w T) for a fast-fading link with constant noise w, in log form.
double log_noise_success(const ScenarioConfig& cfg, double r);

} // namespace manet::analytic::detail
