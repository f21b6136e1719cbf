#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "isg/rng.hpp"

namespace isg::spatial {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Point2& a, const Point2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Square observation region [-half_side, +half_side]^2. Statistics are
/// collected only in the interior sub-square shrunk by guard_margin, which
/// keeps finite-window truncation bias controlled.
struct Window {
    double half_side = 10.0;
    double guard_margin = 0.0;

    double area() const { return 4.0 * half_side * half_side; }
    bool contains(const Point2& p) const {
        return p.x >= -half_side && p.x <= half_side && p.y >= -half_side && p.y <= half_side;
    }
    bool interior(const Point2& p) const {
        double h = half_side - guard_margin;
        return p.x >= -h && p.x <= h && p.y >= -h && p.y <= h;
    }
    /// True when p lies in the boundary annulus of width guard_margin.
    bool touches_boundary(const Point2& p) const { return !interior(p); }
};

/// Guard margin such that the nearest eavesdropper of an interior node lies
/// outside the full window with probability below `miss_prob` (default 1e-3):
/// solves exp(-pi * lambda_e * d^2) = miss_prob.
double default_guard_margin(double lambda_e, double miss_prob = 1e-3);

enum class PointKind { legitimate, eavesdropper };

struct PointSet {
    std::vector<Point2> points;
    double density = 0.0;
    Window window;
    PointKind kind = PointKind::legitimate;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Homogeneous Poisson process on `window`: Poisson(density * area) points,
/// each uniform over the square.
PointSet sample_poisson(double density, const Window& window, rng::Engine& engine,
                        PointKind kind = PointKind::legitimate);
PointSet sample_poisson(double density, const Window& window, std::uint64_t seed,
                        PointKind kind = PointKind::legitimate);

struct NearestResult {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Uniform grid over a bounding square, CSR cell layout. Queries return
/// exactly what a brute-force scan would, ties broken by smallest index.
class SpatialIndex {
  public:
    SpatialIndex() = default;
    /// cell_size <= 0 picks 1/sqrt(density) (about one point per cell),
    /// clamped to a sane cell count.
    explicit SpatialIndex(const PointSet& pts, double cell_size = 0.0);
    SpatialIndex(std::span<const Point2> pts, const Window& window, double cell_size);

    std::optional<NearestResult> nearest(const Point2& query) const;

    /// k-th order statistic (1-based) of distances from query.
    /// Throws std::invalid_argument when fewer than k points are indexed.
    NearestResult kth_nearest(const Point2& query, std::size_t k) const;

    /// Indices of all points with |p - center| <= radius, ascending order.
    std::vector<std::size_t> radius_query(const Point2& center, double radius) const;

    /// Visits (index, dist2) for every point with dist2 <= radius^2, in cell
    /// order (not sorted). The cheap path for graph building.
    template <class Visitor>
    void for_each_within(const Point2& center, double radius, Visitor&& visit) const;

    std::size_t size() const { return points_.size(); }

  private:
    void build(std::span<const Point2> pts);
    std::size_t cell_of(double x, double y) const;
    std::int64_t coord(double v) const;

    std::vector<Point2> points_;
    std::vector<std::uint32_t> cell_start_;  // CSR offsets, size nx*ny+1
    std::vector<std::uint32_t> order_;       // point indices grouped by cell
    double origin_ = 0.0;                    // grid covers [origin, origin+nx*cell]
    double cell_ = 1.0;
    std::int64_t nx_ = 0, ny_ = 0;
};

/// Sector index in 1..num_sectors for the bearing of `target` from `origin`,
/// offset by `offset` radians. Boundary bearings go to the lower sector.
/// Throws std::invalid_argument when target == origin.
int sector_of(const Point2& origin, double offset, int num_sectors, const Point2& target);

/// Eavesdroppers farther than `radius` from every legitimate point (the
/// survivors of disk neutralization).
PointSet neutralize(const PointSet& eves, const PointSet& legit, double radius);

/// One sample of the area of the typical cell of a unit-density
/// Poisson-Voronoi tessellation, by Palm conditioning (a point pinned at the
/// origin) and hit-or-miss integration with n_test_points probes.
double sample_typical_voronoi_area(std::uint64_t seed, std::size_t n_test_points,
                                   const Window& window);

/// Batch of Voronoi-area samples; sample k uses seed mix(master_seed, k) so
/// the batch is reproducible and order-independent.
std::vector<double> sample_voronoi_areas(std::uint64_t master_seed, std::size_t n_samples,
                                         std::size_t n_test_points, const Window& window,
                                         int workers = 1);

template <class Visitor>
void SpatialIndex::for_each_within(const Point2& center, double radius, Visitor&& visit) const {
    if (points_.empty() || radius < 0.0) return;
    const double r2 = radius * radius;
    std::int64_t cx0 = coord(center.x - radius), cx1 = coord(center.x + radius);
    std::int64_t cy0 = coord(center.y - radius), cy1 = coord(center.y + radius);
    for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
        for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
            std::size_t c = static_cast<std::size_t>(cy * nx_ + cx);
            for (std::uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
                std::uint32_t i = order_[s];
                double d2 = dist2(points_[i], center);
                if (d2 <= r2) visit(static_cast<std::size_t>(i), d2);
            }
        }
    }
}

}  // namespace isg::spatial
