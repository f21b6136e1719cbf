#include "isg/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <thread>

namespace isg::spatial {

double default_guard_margin(double lambda_e, double miss_prob) {
    if (lambda_e <= 0.0) return 0.0;
    return std::sqrt(std::log(1.0 / miss_prob) / (3.14159265358979323846 * lambda_e));
}

PointSet sample_poisson(double density, const Window& window, rng::Engine& engine,
                        PointKind kind) {
    if (density < 0.0) throw std::invalid_argument("sample_poisson: density must be >= 0");
    if (window.half_side <= 0.0) throw std::invalid_argument("sample_poisson: window half_side must be > 0");
    PointSet out;
    out.density = density;
    out.window = window;
    out.kind = kind;
    std::int64_t n = rng::poisson_count(engine, density * window.area());
    out.points.reserve(static_cast<std::size_t>(n));
    const double h = window.half_side;
    for (std::int64_t i = 0; i < n; ++i) {
        double x = rng::uniform(engine, -h, h);
        double y = rng::uniform(engine, -h, h);
        out.points.push_back({x, y});
    }
    return out;
}

PointSet sample_poisson(double density, const Window& window, std::uint64_t seed,
                        PointKind kind) {
    auto engine = rng::make_engine(seed);
    return sample_poisson(density, window, engine, kind);
}

// ---------------------------------------------------------------------------
// SpatialIndex

SpatialIndex::SpatialIndex(const PointSet& pts, double cell_size) {
    double cs = cell_size;
    if (cs <= 0.0) {
        cs = pts.density > 0.0 ? 1.0 / std::sqrt(pts.density) : 2.0 * pts.window.half_side;
    }
    // Keep the grid at most ~2048 cells per side; coarser cells only cost
    // extra scanning, never correctness.
    double side = 2.0 * pts.window.half_side;
    cs = std::max(cs, side / 2048.0);
    origin_ = -pts.window.half_side;
    cell_ = cs;
    nx_ = ny_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(side / cs)));
    build(pts.points);
}

SpatialIndex::SpatialIndex(std::span<const Point2> pts, const Window& window, double cell_size) {
    double side = 2.0 * window.half_side;
    double cs = cell_size > 0.0 ? cell_size : side / 64.0;
    cs = std::max(cs, side / 2048.0);
    origin_ = -window.half_side;
    cell_ = cs;
    nx_ = ny_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(side / cs)));
    build(pts);
}

std::int64_t SpatialIndex::coord(double v) const {
    auto c = static_cast<std::int64_t>(std::floor((v - origin_) / cell_));
    return std::clamp<std::int64_t>(c, 0, nx_ - 1);
}

std::size_t SpatialIndex::cell_of(double x, double y) const {
    return static_cast<std::size_t>(coord(y) * nx_ + coord(x));
}

void SpatialIndex::build(std::span<const Point2> pts) {
    points_.assign(pts.begin(), pts.end());
    std::size_t ncell = static_cast<std::size_t>(nx_ * ny_);
    cell_start_.assign(ncell + 1, 0);
    for (const auto& p : points_) cell_start_[cell_of(p.x, p.y) + 1]++;
    for (std::size_t c = 0; c < ncell; ++c) cell_start_[c + 1] += cell_start_[c];
    order_.resize(points_.size());
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::uint32_t i = 0; i < points_.size(); ++i)
        order_[cursor[cell_of(points_[i].x, points_[i].y)]++] = i;
    // Within-cell ascending index order makes tie-breaking by ordinal fall
    // out of the scan order.
    for (std::size_t c = 0; c < ncell; ++c)
        std::sort(order_.begin() + cell_start_[c], order_.begin() + cell_start_[c + 1]);
}

namespace {
// (dist2, index) with the brute-force ordering: nearer first, then lower index.
struct Cand {
    double d2;
    std::size_t idx;
    bool operator<(const Cand& o) const {
        return d2 != o.d2 ? d2 < o.d2 : idx < o.idx;
    }
};
}  // namespace

std::optional<NearestResult> SpatialIndex::nearest(const Point2& query) const {
    if (points_.empty()) return std::nullopt;
    Cand best{std::numeric_limits<double>::infinity(), points_.size()};
    std::int64_t qx = coord(query.x), qy = coord(query.y);
    std::int64_t max_ring = std::max(nx_, ny_);
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        if (best.idx != points_.size()) {
            // Cells in ring `ring` are at least (ring-1)*cell away.
            double lower = (static_cast<double>(ring) - 1.0) * cell_;
            if (lower > 0.0 && lower * lower > best.d2) break;
        }
        std::int64_t x0 = qx - ring, x1 = qx + ring, y0 = qy - ring, y1 = qy + ring;
        for (std::int64_t cy = y0; cy <= y1; ++cy) {
            if (cy < 0 || cy >= ny_) continue;
            bool edge_row = (cy == y0 || cy == y1);
            std::int64_t step = edge_row ? 1 : (x1 - x0 == 0 ? 1 : x1 - x0);
            for (std::int64_t cx = x0; cx <= x1; cx += step) {
                if (cx < 0 || cx >= nx_) continue;
                std::size_t c = static_cast<std::size_t>(cy * nx_ + cx);
                for (std::uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
                    std::uint32_t i = order_[s];
                    Cand cand{dist2(points_[i], query), i};
                    if (cand < best) best = cand;
                }
            }
        }
    }
    return NearestResult{best.idx, std::sqrt(best.d2)};
}

NearestResult SpatialIndex::kth_nearest(const Point2& query, std::size_t k) const {
    if (k == 0) throw std::invalid_argument("kth_nearest: k must be >= 1");
    if (points_.size() < k)
        throw std::invalid_argument("kth_nearest: fewer points than k (insufficient points)");
    std::priority_queue<Cand> heap;  // max-heap keeps the k best seen
    std::int64_t qx = coord(query.x), qy = coord(query.y);
    std::int64_t max_ring = std::max(nx_, ny_);
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        if (heap.size() == k) {
            double lower = (static_cast<double>(ring) - 1.0) * cell_;
            if (lower > 0.0 && lower * lower > heap.top().d2) break;
        }
        std::int64_t x0 = qx - ring, x1 = qx + ring, y0 = qy - ring, y1 = qy + ring;
        for (std::int64_t cy = y0; cy <= y1; ++cy) {
            if (cy < 0 || cy >= ny_) continue;
            bool edge_row = (cy == y0 || cy == y1);
            std::int64_t step = edge_row ? 1 : (x1 - x0 == 0 ? 1 : x1 - x0);
            for (std::int64_t cx = x0; cx <= x1; cx += step) {
                if (cx < 0 || cx >= nx_) continue;
                std::size_t c = static_cast<std::size_t>(cy * nx_ + cx);
                for (std::uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
                    std::uint32_t i = order_[s];
                    Cand cand{dist2(points_[i], query), i};
                    if (heap.size() < k) {
                        heap.push(cand);
                    } else if (cand < heap.top()) {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
        }
    }
    return NearestResult{heap.top().idx, std::sqrt(heap.top().d2)};
}

std::vector<std::size_t> SpatialIndex::radius_query(const Point2& center, double radius) const {
    std::vector<std::size_t> out;
    for_each_within(center, radius, [&](std::size_t i, double) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

int sector_of(const Point2& origin, double offset, int num_sectors, const Point2& target) {
    if (num_sectors < 1) throw std::invalid_argument("sector_of: need at least one sector");
    double dx = target.x - origin.x, dy = target.y - origin.y;
    if (dx == 0.0 && dy == 0.0)
        throw std::invalid_argument("sector_of: target coincides with origin (degenerate direction)");
    const double two_pi = 6.283185307179586476925286766559;
    double bearing = std::atan2(dy, dx);
    double theta = std::fmod(bearing - offset, two_pi);
    if (theta < 0.0) theta += two_pi;
    const double width = two_pi / num_sectors;
    int l = static_cast<int>(theta / width) + 1;
    // Bearings exactly on a sector boundary belong to the sector below.
    if (theta == (l - 1) * width) l = (l == 1) ? num_sectors : l - 1;
    return std::min(l, num_sectors);
}

PointSet neutralize(const PointSet& eves, const PointSet& legit, double radius) {
    if (radius < 0.0) throw std::invalid_argument("neutralize: radius must be >= 0");
    PointSet out;
    out.density = eves.density;
    out.window = eves.window;
    out.kind = eves.kind;
    if (eves.empty()) return out;
    if (legit.empty()) {
        out.points = eves.points;
        return out;
    }
    SpatialIndex idx(legit);
    for (const auto& e : eves.points) {
        auto n = idx.nearest(e);
        if (n->distance > radius) out.points.push_back(e);
    }
    return out;
}

double sample_typical_voronoi_area(std::uint64_t seed, std::size_t n_test_points,
                                   const Window& window) {
    auto engine = rng::make_engine(seed);
    PointSet pts = sample_poisson(1.0, window, engine);
    // Palm conditioning: the typical cell is the one around a point pinned at
    // the origin. Prepending it makes it index 0, so distance ties go its way.
    pts.points.insert(pts.points.begin(), Point2{0.0, 0.0});
    SpatialIndex idx(pts);
    const double h = window.half_side;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < n_test_points; ++t) {
        Point2 q{rng::uniform(engine, -h, h), rng::uniform(engine, -h, h)};
        if (idx.nearest(q)->index == 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n_test_points) * window.area();
}

std::vector<double> sample_voronoi_areas(std::uint64_t master_seed, std::size_t n_samples,
                                         std::size_t n_test_points, const Window& window,
                                         int workers) {
    std::vector<double> out(n_samples);
    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            std::uint64_t s = rng::mix_seed({master_seed, rng::key(rng::Stream::voronoi), k});
            out[k] = sample_typical_voronoi_area(s, n_test_points, window);
        }
    };
    int w = std::max(1, workers);
    if (w == 1 || n_samples < 2) {
        run(0, n_samples);
    } else {
        std::vector<std::thread> threads;
        std::size_t chunk = (n_samples + w - 1) / w;
        for (int t = 0; t < w; ++t) {
            std::size_t lo = std::min(n_samples, static_cast<std::size_t>(t) * chunk);
            std::size_t hi = std::min(n_samples, lo + chunk);
            if (lo < hi) threads.emplace_back(run, lo, hi);
        }
        for (auto& th : threads) th.join();
    }
    return out;
}

}  // namespace isg::spatial
