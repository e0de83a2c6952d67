#pragma once

#include <string>
#include <variant>
#include <vector>

#include "manet/channel.hpp"

namespace manet {

enum class TimeScale { Fast, Slow };

/// Which channel marks are redrawn every slot (Fast) or frozen (Slow).
struct Variability
{
    TimeScale fading = TimeScale::Fast;
    TimeScale noise = TimeScale::Fast;
};

std::string to_string(TimeScale t);

/// Each transmitter has a dedicated receiver at distance r.
struct BipolarReceiver
{
    double r;
};

/// Receiver is the nearest point of an independent Poisson set of density lambda0.
struct IpnrReceiver
{
    double lambda0;
};

/// Receiver is the nearest other MANET node.
struct MnnReceiver
{
};

/// Independent Poisson receivers of density lambda0 plus a square lattice
/// placed so every location has a receiver within distance kappa.
struct PoissonPlusGridReceiver
{
    double lambda0;
    double kappa;
};

using ReceiverModel = std::variant<BipolarReceiver, IpnrReceiver, MnnReceiver, PoissonPlusGridReceiver>;

std::string receiver_name(const ReceiverModel& rx);

/// Whether the typical link sees interference, or it is perfectly cancelled
/// (noise-limited network).
enum class InterferenceMode { Present, Cancelled };

/// Static: node locations frozen for all slots. Resampled: the MANET is
/// redrawn i.i.d. each slot (high-mobility limit), receivers stay fixed.
enum class Mobility { Static, Resampled };

/// Complete parameterisation of one MANET model instance.
struct ScenarioConfig
{
    double lambda = 1.0;  ///< MANET node density
    double p = 0.5;       ///< Aloha medium-access probability
    double T = 1.0;       ///< SINR threshold
    PathLoss pathloss = PathLoss::power_law(1.0, 4.0);
    Fading fading = Fading::rayleigh(1.0);
    Noise noise = Noise::zero();
    ReceiverModel receiver = BipolarReceiver{1.0};
    Variability variability{};
    InterferenceMode interference = InterferenceMode::Present;
    Mobility mobility = Mobility::Static;
};

struct Issue
{
    enum class Severity { Violation, Warning };
    Severity severity;
    std::string field;
    std::string message;
};

/// Checks every invariant of the configuration. Returns an empty list when
/// all hold; warnings do not make a configuration unusable.
std::vector<Issue> validate(const ScenarioConfig& cfg);

/// True when validate() reports no violations (warnings allowed).
bool is_valid(const std::vector<Issue>& issues);

} // namespace manet
