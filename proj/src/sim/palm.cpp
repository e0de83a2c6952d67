#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "manet/sim.hpp"

namespace manet::sim {

namespace {

constexpr double kPi = std::numbers::pi;

/// Bucket grid over a point set for nearest-neighbour queries.
class NearestIndex
{
  public:
    NearestIndex(const std::vector<Point>& pts, double radius) : pts_(pts)
    {
        const double n = std::max<double>(1.0, static_cast<double>(pts.size()));
        side_ = std::max(1, static_cast<int>(std::sqrt(n / 2.0)));
        origin_ = -radius;
        cell_ = 2.0 * radius / side_;
        cells_.assign(static_cast<std::size_t>(side_) * side_, {});
        for (std::size_t i = 0; i < pts.size(); ++i)
            cells_[slot(pts[i])].push_back(i);
    }

    /// Nearest point other than `skip`; ties go to the lower index.
    std::optional<std::size_t> nearest(const Point& q, std::optional<std::size_t> skip = std::nullopt) const
    {
        const int cx = coord(q.x);
        const int cy = coord(q.y);
        std::optional<std::size_t> best;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= side_; ++ring) {
            for (int ix = cx - ring; ix <= cx + ring; ++ix) {
                for (int iy = cy - ring; iy <= cy + ring; ++iy) {
                    if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring)
                        continue;
                    if (ix < 0 || iy < 0 || ix >= side_ || iy >= side_)
                        continue;
                    for (std::size_t i : cells_[static_cast<std::size_t>(ix) * side_ + iy]) {
                        if (skip && i == *skip)
                            continue;
                        const double dx = pts_[i].x - q.x;
                        const double dy = pts_[i].y - q.y;
                        const double d2 = dx * dx + dy * dy;
                        if (d2 < best_d2 || (d2 == best_d2 && best && i < *best)) {
                            best_d2 = d2;
                            best = i;
                        }
                    }
                }
            }
            // Every unvisited cell is at least `ring * cell_` away.
            if (best && std::sqrt(best_d2) <= ring * cell_)
                break;
        }
        return best;
    }

  private:
    int coord(double v) const { return std::clamp(static_cast<int>((v - origin_) / cell_), 0, side_ - 1); }
    std::size_t slot(const Point& p) const { return static_cast<std::size_t>(coord(p.x)) * side_ + coord(p.y); }

    const std::vector<Point>& pts_;
    int side_;
    double origin_;
    double cell_;
    std::vector<std::vector<std::size_t>> cells_;
};

/// Linear scan; ties go to the lower index.
std::optional<std::size_t> nearest_scan(const std::vector<Point>& pts, const Point& q,
                                        std::optional<std::size_t> skip = std::nullopt)
{
    std::optional<std::size_t> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (skip && i == *skip)
            continue;
        const double dx = pts[i].x - q.x;
        const double dy = pts[i].y - q.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

Point uniform_in_disk(double radius, RandomStream& rng)
{
    for (;;) {
        const double x = 2.0 * rng.uniform() - 1.0;
        const double y = 2.0 * rng.uniform() - 1.0;
        if (x * x + y * y < 1.0)
            return {radius * x, radius * y};
    }
}

std::vector<Point> poisson_disk(double density, double radius, RandomStream& rng)
{
    std::poisson_distribution<std::size_t> count(density * kPi * radius * radius);
    const std::size_t n = count(rng);
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back(uniform_in_disk(radius, rng));
    return pts;
}

Point at_distance(const Point& from, double r, RandomStream& rng)
{
    const double phi = 2.0 * kPi * rng.uniform();
    return {from.x + r * std::cos(phi), from.y + r * std::sin(phi)};
}

double reference_distance(const ScenarioConfig& cfg)
{
    struct Visitor
    {
        const ScenarioConfig& cfg;
        double median(double density) const { return std::sqrt(std::log(2.0) / (kPi * density)); }
        double operator()(const BipolarReceiver& b) const { return b.r; }
        double operator()(const IpnrReceiver& r) const { return median(r.lambda0); }
        double operator()(const MnnReceiver&) const { return median(cfg.lambda); }
        double operator()(const PoissonPlusGridReceiver& g) const { return std::min(median(g.lambda0), g.kappa); }
    };
    return std::visit(Visitor{cfg}, cfg.receiver);
}

} // namespace

double distance(const Point& a, const Point& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double guard_radius(const ScenarioConfig& cfg)
{
    const double r_ref = reference_distance(cfg);
    if (cfg.p == 0.0 || cfg.interference == InterferenceMode::Cancelled)
        return r_ref;
    const double beta = cfg.pathloss.beta();
    const double A = cfg.pathloss.scale();
    const double lr = cfg.pathloss(r_ref);
    const double base = 2000.0 * kPi * cfg.lambda * cfg.p * cfg.T * lr / (std::pow(A, beta) * (beta - 2.0));
    return r_ref + std::pow(base, 1.0 / (beta - 2.0));
}

double default_window_radius(const ScenarioConfig& cfg)
{
    return std::max(10.0, 5.0 * guard_radius(cfg));
}

PalmSample sample_palm(const ScenarioConfig& cfg, double window_radius, RandomStream& rng, bool all_receivers)
{
    const double guard = guard_radius(cfg);
    if (!(window_radius >= guard))
        throw DomainError("window radius " + std::to_string(window_radius) + " is below the guard radius " +
                          std::to_string(guard));

    PalmSample s;
    double radius = window_radius;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 6)
            throw NumericError("no candidate receiver after enlarging the window 6 times");
        s = PalmSample{};
        s.window_radius = radius;
        s.nodes = poisson_disk(cfg.lambda, radius, rng);
        s.nodes.insert(s.nodes.begin(), Point{});
        const std::size_t count = all_receivers ? s.nodes.size() : 1;
        s.receivers.assign(count, Point{});

        bool ok = true;
        if (const auto* b = std::get_if<BipolarReceiver>(&cfg.receiver)) {
            for (std::size_t i = 0; i < count; ++i)
                s.receivers[i] = at_distance(s.nodes[i], b->r, rng);
        } else if (std::holds_alternative<MnnReceiver>(cfg.receiver)) {
            if (s.nodes.size() < 2) {
                ok = false;
            } else {
                s.receiver_node = nearest_scan(s.nodes, s.nodes[0], 0);
                s.receivers[0] = s.nodes[*s.receiver_node];
                if (all_receivers) {
                    const NearestIndex index(s.nodes, radius);
                    for (std::size_t i = 1; i < count; ++i)
                        s.receivers[i] = s.nodes[*index.nearest(s.nodes[i], i)];
                }
            }
        } else {
            double lambda0 = 0.0;
            std::optional<double> kappa;
            if (const auto* ipnr = std::get_if<IpnrReceiver>(&cfg.receiver)) {
                lambda0 = ipnr->lambda0;
            } else {
                const auto& g = std::get<PoissonPlusGridReceiver>(cfg.receiver);
                lambda0 = g.lambda0;
                kappa = g.kappa;
            }
            const std::vector<Point> phi0 = poisson_disk(lambda0, radius, rng);
            Point offset;
            const double spacing = kappa ? *kappa * std::numbers::sqrt2 : 0.0;
            if (kappa)
                offset = {spacing * rng.uniform(), spacing * rng.uniform()};
            if (phi0.empty() && !kappa) {
                ok = false;
            } else {
                std::optional<NearestIndex> index;
                if (all_receivers)
                    index.emplace(phi0, radius);
                for (std::size_t i = 0; i < count; ++i) {
                    const Point& x = s.nodes[i];
                    std::optional<Point> best;
                    if (const auto j = index ? index->nearest(x) : nearest_scan(phi0, x))
                        best = phi0[*j];
                    if (kappa) {
                        const Point lattice{offset.x + spacing * std::round((x.x - offset.x) / spacing),
                                            offset.y + spacing * std::round((x.y - offset.y) / spacing)};
                        if (!best || distance(x, lattice) < distance(x, *best))
                            best = lattice;
                    }
                    s.receivers[i] = *best;
                }
            }
        }
        if (ok)
            break;
        radius *= 2.0;
    }

    if (cfg.variability.fading == TimeScale::Slow) {
        s.marks.fading.reserve(s.nodes.size());
        for (std::size_t i = 0; i < s.nodes.size(); ++i)
            s.marks.fading.push_back(cfg.fading.sample(rng));
    }
    if (cfg.variability.noise == TimeScale::Slow)
        s.marks.noise = cfg.noise.sample(rng);
    return s;
}

} // namespace manet::sim
