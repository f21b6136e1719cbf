#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "isg/spatial.hpp"

using namespace isg;
using spatial::Point2;
using spatial::PointSet;
using spatial::SpatialIndex;
using spatial::Window;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exhaustive-scan oracle: nearest by (distance, index).
std::optional<spatial::NearestResult> brute_nearest(const Point2& q,
                                                    const std::vector<Point2>& pts) {
    if (pts.empty()) return std::nullopt;
    std::size_t best = 0;
    double bd = spatial::dist2(pts[0], q);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double d = spatial::dist2(pts[i], q);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return spatial::NearestResult{best, std::sqrt(bd)};
}

spatial::NearestResult brute_kth(const Point2& q, const std::vector<Point2>& pts,
                                 std::size_t k) {
    std::vector<std::pair<double, std::size_t>> ds;
    for (std::size_t i = 0; i < pts.size(); ++i) ds.push_back({spatial::dist2(pts[i], q), i});
    std::sort(ds.begin(), ds.end());
    return {ds[k - 1].second, std::sqrt(ds[k - 1].first)};
}

PointSet make_set(std::vector<Point2> pts, double half_side, double density = 1.0) {
    PointSet s;
    s.points = std::move(pts);
    s.density = density;
    s.window = Window{half_side, 0.0};
    return s;
}

}  // namespace

TEST_CASE("sample_poisson: zero density gives the empty process") {
    auto s = spatial::sample_poisson(0.0, Window{5.0, 0.0}, 42u);
    CHECK(s.empty());
    CHECK(s.density == 0.0);
}

TEST_CASE("sample_poisson: negative density rejected") {
    auto eng = rng::make_engine(1);
    CHECK_THROWS_AS(spatial::sample_poisson(-1.0, Window{5.0, 0.0}, eng),
                    std::invalid_argument);
}

TEST_CASE("sample_poisson: identical seed, identical output") {
    Window w{7.0, 0.0};
    auto a = spatial::sample_poisson(1.3, w, 987u);
    auto b = spatial::sample_poisson(1.3, w, 987u);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
    }
    CHECK(w.contains(a.points.front()));
}

TEST_CASE("sample_poisson: count mean and variance match Poisson(density*area)") {
    // density 1, side 10 (half_side 5): mean and variance both 100.
    Window w{5.0, 0.0};
    const int reps = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto s = spatial::sample_poisson(1.0, w, 1000u + r);
        double n = static_cast<double>(s.size());
        sum += n;
        sum2 += n * n;
    }
    double mean = sum / reps;
    double var = sum2 / reps - mean * mean;
    double se_mean = std::sqrt(100.0 / reps);
    CHECK(std::abs(mean - 100.0) < 3.0 * se_mean);
    // Var of the sample variance of Poisson(100) ~ (mu + 2 mu^2) * 2/reps.
    CHECK(std::abs(var - 100.0) < 4.0 * std::sqrt(2.0 * 100.0 * 101.0 / reps));
}

TEST_CASE("sample_poisson: empirical mean count, density 2 side 5") {
    Window w{2.5, 0.0};
    const int reps = 10000;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) sum += spatial::sample_poisson(2.0, w, 555000u + r).size();
    double mean = sum / reps;
    double se = std::sqrt(50.0 / reps);
    CHECK(std::abs(mean - 50.0) < 3.0 * se);
}

TEST_CASE("sample_poisson: counts in disjoint quadrants are uncorrelated") {
    Window w{4.0, 0.0};
    const int reps = 3000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int r = 0; r < reps; ++r) {
        auto s = spatial::sample_poisson(1.0, w, 77000u + r);
        double a = 0, b = 0;
        for (const auto& p : s.points) {
            if (p.x > 0 && p.y > 0) a += 1;
            if (p.x < 0 && p.y < 0) b += 1;
        }
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    double n = reps;
    double cov = sxy / n - (sx / n) * (sy / n);
    double corr = cov / std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(n));
}

TEST_CASE("nearest: trivial cases") {
    auto s = make_set({{1, 0}, {2, 0}}, 5.0);
    SpatialIndex idx(s);
    auto r = idx.nearest({0, 0});
    REQUIRE(r.has_value());
    CHECK(r->index == 0);
    CHECK(r->distance == doctest::Approx(1.0));

    SpatialIndex empty_idx(make_set({}, 5.0));
    CHECK_FALSE(empty_idx.nearest({0, 0}).has_value());
}

TEST_CASE("nearest ties break to the smallest ordinal") {
    auto s = make_set({{2, 0}, {-2, 0}, {0, 2}}, 5.0);
    SpatialIndex idx(s);
    auto r = idx.nearest({0, 0});
    REQUIRE(r.has_value());
    CHECK(r->index == 0);
}

TEST_CASE("nearest/kth equal exhaustive scan on random instances") {
    auto eng = rng::make_engine(2024);
    Window w{10.0, 0.0};
    auto pts = spatial::sample_poisson(2.5, w, eng);  // ~1000 points
    SpatialIndex idx(pts);
    for (int q = 0; q < 1000; ++q) {
        Point2 query{rng::uniform(eng, -10, 10), rng::uniform(eng, -10, 10)};
        auto got = idx.nearest(query);
        auto want = brute_nearest(query, pts.points);
        REQUIRE(got.has_value());
        CHECK(got->index == want->index);
        CHECK(got->distance == doctest::Approx(want->distance));
        auto g3 = idx.kth_nearest(query, 3);
        auto w3 = brute_kth(query, pts.points, 3);
        CHECK(g3.index == w3.index);
        CHECK(g3.distance == doctest::Approx(w3.distance));
        CHECK(idx.kth_nearest(query, 1).index == got->index);
    }
}

TEST_CASE("radius_query equals brute force") {
    auto eng = rng::make_engine(11);
    Window w{8.0, 0.0};
    auto pts = spatial::sample_poisson(2.0, w, eng);
    SpatialIndex idx(pts);
    for (int q = 0; q < 200; ++q) {
        Point2 c{rng::uniform(eng, -8, 8), rng::uniform(eng, -8, 8)};
        double r = rng::uniform(eng, 0.0, 4.0);
        auto got = idx.radius_query(c, r);
        std::vector<std::size_t> want;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (spatial::dist2(pts.points[i], c) <= r * r) want.push_back(i);
        CHECK(got == want);
    }
}

TEST_CASE("kth_nearest: order statistic and insufficient-points error") {
    auto s = make_set({{1, 0}, {3, 0}, {2, 0}}, 5.0);
    SpatialIndex idx(s);
    CHECK(idx.kth_nearest({0, 0}, 2).distance == doctest::Approx(2.0));
    CHECK_THROWS_AS(idx.kth_nearest({0, 0}, 4), std::invalid_argument);
}

TEST_CASE("kth_nearest: mean squared nearest distance is 1/(pi lambda)") {
    // Squared nearest-neighbor distance under unit density is Exp(pi).
    const int reps = 4000;
    double sum = 0.0;
    Window w{5.0, 0.0};
    for (int r = 0; r < reps; ++r) {
        auto eng = rng::make_engine(31000u + r);
        auto pts = spatial::sample_poisson(1.0, w, eng);
        if (pts.empty()) continue;
        SpatialIndex idx(pts);
        double d = idx.kth_nearest({0, 0}, 1).distance;
        sum += d * d;
    }
    double mean = sum / reps;
    double se = (1.0 / kPi) / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(mean - 1.0 / kPi) < 3.0 * se);
}

TEST_CASE("sector_of: single sector and quadrant case") {
    Point2 o{0, 0};
    CHECK(spatial::sector_of(o, 0.0, 1, {3, -7}) == 1);
    CHECK(spatial::sector_of(o, 0.0, 4, {1, 1}) == 1);   // bearing pi/4
    CHECK(spatial::sector_of(o, 0.0, 4, {-1, 1}) == 2);  // bearing 3pi/4
    CHECK(spatial::sector_of(o, 0.0, 4, {-1, -1}) == 3);
    CHECK(spatial::sector_of(o, 0.0, 4, {1, -1}) == 4);
    CHECK_THROWS_AS(spatial::sector_of(o, 0.0, 4, o), std::invalid_argument);
}

TEST_CASE("sector_of: uniform bearings split evenly across L=4 sectors") {
    auto eng = rng::make_engine(7);
    const int n = 100000;
    int counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        double a = rng::uniform(eng, 0.0, 2.0 * kPi);
        Point2 t{std::cos(a), std::sin(a)};
        counts[spatial::sector_of({0, 0}, 0.3, 4, t)]++;
    }
    for (int l = 1; l <= 4; ++l) {
        double frac = counts[l] / static_cast<double>(n);
        CHECK(std::abs(frac - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / n));
    }
}

TEST_CASE("sector_of partitions: every target lands in exactly one sector") {
    auto eng = rng::make_engine(99);
    for (int rep = 0; rep < 500; ++rep) {
        int L = 1 + static_cast<int>(rng::uniform01(eng) * 8);
        double off = rng::uniform(eng, -10.0, 10.0);
        Point2 o{rng::uniform(eng, -5, 5), rng::uniform(eng, -5, 5)};
        Point2 t{rng::uniform(eng, -5, 5), rng::uniform(eng, -5, 5)};
        if (t.x == o.x && t.y == o.y) continue;
        int s = spatial::sector_of(o, off, L, t);
        CHECK(s >= 1);
        CHECK(s <= L);
    }
}

TEST_CASE("neutralize: trivial and oracle cases") {
    auto legit = make_set({{0, 0}}, 5.0);
    auto eves = make_set({{1, 0}, {3, 0}}, 5.0);
    eves.kind = spatial::PointKind::eavesdropper;

    auto none = spatial::neutralize(eves, legit, 0.0);
    CHECK(none.size() == 2);

    auto some = spatial::neutralize(eves, legit, 2.0);
    REQUIRE(some.size() == 1);
    CHECK(some.points[0].x == doctest::Approx(3.0));
}

TEST_CASE("neutralize equals all-pairs filter and is idempotent") {
    auto eng = rng::make_engine(5150);
    Window w{6.0, 0.0};
    auto legit = spatial::sample_poisson(1.0, w, eng);
    auto eves = spatial::sample_poisson(0.8, w, eng, spatial::PointKind::eavesdropper);
    double rho = 0.7;
    auto got = spatial::neutralize(eves, legit, rho);

    std::vector<Point2> want;
    for (const auto& e : eves.points) {
        bool safe = true;
        for (const auto& l : legit.points)
            if (spatial::dist2(e, l) <= rho * rho) safe = false;
        if (safe) want.push_back(e);
    }
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.points[i].x == want[i].x);
        CHECK(got.points[i].y == want[i].y);
    }

    auto twice = spatial::neutralize(got, legit, rho);
    CHECK(twice.size() == got.size());
}

TEST_CASE("typical Voronoi cell: nonnegative samples, unit mean") {
    Window w{6.0, 0.0};
    auto areas = spatial::sample_voronoi_areas(20240601u, 3000, 4000, w);
    double sum = 0.0, sum2 = 0.0;
    for (double a : areas) {
        CHECK(a >= 0.0);
        sum += a;
        sum2 += a * a;
    }
    double n = static_cast<double>(areas.size());
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    double se = std::sqrt(var / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);  // E{A} = 1 for the typical cell
}

TEST_CASE("typical Voronoi cell: second moment regression") {
    // Hit-or-miss estimate of E{A^2}; the published Poisson-Voronoi value is
    // about 1.280, and with 4000 test probes the estimator carries a small
    // positive inflation (~ +E{A} * W / n_test).
    Window w{6.0, 0.0};
    auto areas = spatial::sample_voronoi_areas(77u, 4000, 4000, w);
    double sum2 = 0.0;
    for (double a : areas) sum2 += a * a;
    double m2 = sum2 / areas.size();
    CHECK(m2 == doctest::Approx(1.280 + 0.036).epsilon(0.05));
}
