#include "isg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace isg::graph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

void finalize(ISGraph& g) {
    for (auto& a : g.out) std::sort(a.begin(), a.end());
    g.rebuild_in_adjacency();
}

/// Inverse-gain score: smaller score = stronger channel. Comparing scores is
/// equivalent to comparing gains, and for unit fading it reduces to squared
/// distance, which keeps the fading builder bit-identical to the baseline one.
struct GainScore {
    channel::GainModel::Kind kind;
    double b;
    bool unit_fading;

    explicit GainScore(const channel::ChannelParams& p)
        : kind(p.gain.kind), b(p.gain.b), unit_fading(p.fading.is_deterministic()) {}

    double operator()(double d2, double z) const {
        if (unit_fading) return d2;  // both gain variants decrease in r
        double att = std::pow(d2, b);
        if (kind == channel::GainModel::Kind::bounded) att += 1.0;
        return att / z;
    }
};

}  // namespace

void ISGraph::rebuild_in_adjacency() {
    in.assign(nodes.size(), {});
    std::vector<std::size_t> count(nodes.size(), 0);
    for (const auto& a : out)
        for (std::int32_t j : a) count[static_cast<std::size_t>(j)]++;
    for (std::size_t j = 0; j < nodes.size(); ++j) in[j].reserve(count[j]);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::int32_t j : out[i]) in[static_cast<std::size_t>(j)].push_back(static_cast<std::int32_t>(i));
}

void EdgeRule::validate() const {
    if (sectors < 1) throw std::invalid_argument("edge rule: sectors must be >= 1");
    if (neutralization_radius < 0.0)
        throw std::invalid_argument("edge rule: neutralization radius must be >= 0");
}

const char* to_string(EdgeRule::Kind k) {
    switch (k) {
        case EdgeRule::Kind::baseline: return "baseline";
        case EdgeRule::Kind::fading: return "fading";
        case EdgeRule::Kind::threshold: return "threshold";
        case EdgeRule::Kind::sectorized: return "sectorized";
        case EdgeRule::Kind::neutralized: return "neutralized";
        case EdgeRule::Kind::colluding: return "colluding";
    }
    return "?";
}

const char* to_string(ComponentKind k) {
    switch (k) {
        case ComponentKind::out: return "out";
        case ComponentKind::in: return "in";
        case ComponentKind::weak: return "weak";
        case ComponentKind::strong: return "strong";
    }
    return "?";
}

ISGraph build_baseline(const spatial::PointSet& legit, const spatial::PointSet& eves) {
    ISGraph g;
    g.nodes = legit.points;
    const std::size_t n = g.nodes.size();
    g.out.assign(n, {});
    if (n == 0) {
        g.rebuild_in_adjacency();
        return g;
    }
    if (eves.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            g.out[i].reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) g.out[i].push_back(static_cast<std::int32_t>(j));
        }
        g.rebuild_in_adjacency();
        return g;
    }
    spatial::SpatialIndex legit_idx(legit);
    spatial::SpatialIndex eve_idx(eves);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = g.nodes[i];
        double dstar2 = [&] {
            auto ne = eve_idx.nearest(p);
            return ne->distance * ne->distance;
        }();
        legit_idx.for_each_within(p, std::sqrt(dstar2), [&](std::size_t j, double d2) {
            if (j != i && d2 < dstar2) g.out[i].push_back(static_cast<std::int32_t>(j));
        });
    }
    finalize(g);
    return g;
}

double pair_fading(const channel::FadingModel& model, std::uint64_t seed, std::uint32_t lo,
                   std::uint32_t hi) {
    if (lo > hi) std::swap(lo, hi);
    std::uint64_t k = rng::mix_seed({seed, 0xF00DULL, lo, hi});
    return channel::sample_fading(model, k);
}

double eve_fading(const channel::FadingModel& model, std::uint64_t seed, std::uint32_t legit_idx,
                  std::uint32_t eve_idx) {
    std::uint64_t k = rng::mix_seed({seed, 0xEA5EULL, legit_idx, eve_idx});
    return channel::sample_fading(model, k);
}

ISGraph build_fading(const spatial::PointSet& legit, const spatial::PointSet& eves,
                     const channel::ChannelParams& params, std::uint64_t seed) {
    params.validate();
    ISGraph g;
    g.nodes = legit.points;
    const std::size_t n = g.nodes.size();
    const std::size_t m = eves.points.size();
    g.out.assign(n, {});
    GainScore score(params);
    const auto& fading = params.fading;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = g.nodes[i];
        // Strongest eavesdropper channel seen from x_i.
        double best_eve_score = kInf;
        for (std::size_t k = 0; k < m; ++k) {
            double z = fading.is_deterministic()
                           ? 1.0
                           : eve_fading(fading, seed, static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(k));
            double s = score(spatial::dist2(p, eves.points[k]), z);
            best_eve_score = std::min(best_eve_score, s);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double z = fading.is_deterministic()
                           ? 1.0
                           : pair_fading(fading, seed, static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j));
            if (score(spatial::dist2(p, g.nodes[j]), z) < best_eve_score)
                g.out[i].push_back(static_cast<std::int32_t>(j));
        }
    }
    finalize(g);
    return g;
}

ISGraph build_threshold(const spatial::PointSet& legit, const spatial::PointSet& eves,
                        const channel::ChannelParams& params) {
    params.validate();
    if (params.gain.kind != channel::GainModel::Kind::unbounded)
        throw std::invalid_argument("build_threshold: requires the unbounded gain g(r) = 1/r^{2b}");
    ISGraph g;
    g.nodes = legit.points;
    const std::size_t n = g.nodes.size();
    g.out.assign(n, {});
    const double b = params.gain.b;
    const double c1 = (params.sigma2_ell / params.sigma2_e) * std::exp2(params.rho);
    const double c2 = (params.sigma2_ell / params.p_ell) * (std::exp2(params.rho) - 1.0);
    spatial::SpatialIndex legit_idx(legit);
    spatial::SpatialIndex eve_idx(eves);
    const bool have_eves = !eves.empty();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = g.nodes[i];
        double ge = 0.0;  // gain toward the nearest eavesdropper
        if (have_eves) {
            auto ne = eve_idx.nearest(p);
            ge = ne->distance > 0.0 ? std::pow(ne->distance, -2.0 * b) : kInf;
        }
        double t = c1 * ge + c2;
        if (t <= 0.0) {
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) g.out[i].push_back(static_cast<std::int32_t>(j));
            continue;
        }
        if (t == kInf) continue;  // eavesdropper on top of the node
        double rmax = std::pow(t, -0.5 / b) * (1.0 + 1e-9);
        legit_idx.for_each_within(p, rmax, [&](std::size_t j, double d2) {
            if (j == i) return;
            double r = std::sqrt(d2);
            double gl = r > 0.0 ? std::pow(r, -2.0 * b) : kInf;
            if (gl > t) g.out[i].push_back(static_cast<std::int32_t>(j));
        });
    }
    finalize(g);
    return g;
}

ISGraph build_sectorized(const spatial::PointSet& legit, const spatial::PointSet& eves,
                         int num_sectors, std::span<const double> offsets, std::uint64_t seed) {
    if (num_sectors < 1) throw std::invalid_argument("build_sectorized: need at least one sector");
    ISGraph g;
    g.nodes = legit.points;
    const std::size_t n = g.nodes.size();
    const std::size_t m = eves.points.size();
    g.out.assign(n, {});
    std::vector<double> offs;
    if (offsets.empty()) {
        offs.resize(n);
        rng::SplitMix64 eng(rng::mix_seed({seed, rng::key(rng::Stream::sector_offsets)}));
        for (auto& o : offs) o = rng::uniform(eng, 0.0, kTwoPi);
    } else {
        if (offsets.size() != n)
            throw std::invalid_argument("build_sectorized: offsets size must match node count");
        offs.assign(offsets.begin(), offsets.end());
    }
    const int L = num_sectors;
    spatial::SpatialIndex legit_idx(legit);
    std::vector<double> sector_d2(static_cast<std::size_t>(L));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = g.nodes[i];
        std::fill(sector_d2.begin(), sector_d2.end(), kInf);
        bool blocked = false;  // eavesdropper exactly at the node
        for (std::size_t k = 0; k < m; ++k) {
            double d2 = spatial::dist2(p, eves.points[k]);
            if (d2 == 0.0) {
                blocked = true;
                break;
            }
            int l = spatial::sector_of(p, offs[i], L, eves.points[k]);
            sector_d2[static_cast<std::size_t>(l - 1)] =
                std::min(sector_d2[static_cast<std::size_t>(l - 1)], d2);
        }
        if (blocked) continue;
        double reach2 = *std::max_element(sector_d2.begin(), sector_d2.end());
        auto try_edge = [&](std::size_t j, double d2) {
            if (j == i) return;
            int l = d2 > 0.0 ? spatial::sector_of(p, offs[i], L, g.nodes[j]) : 1;
            if (d2 < sector_d2[static_cast<std::size_t>(l - 1)])
                g.out[i].push_back(static_cast<std::int32_t>(j));
        };
        if (reach2 == kInf) {
            for (std::size_t j = 0; j < n; ++j) try_edge(j, spatial::dist2(p, g.nodes[j]));
        } else {
            legit_idx.for_each_within(p, std::sqrt(reach2), try_edge);
        }
    }
    finalize(g);
    return g;
}

ISGraph build_neutralized(const spatial::PointSet& legit, const spatial::PointSet& eves,
                          double radius) {
    return build_baseline(legit, spatial::neutralize(eves, legit, radius));
}

ISGraph build_colluding(const spatial::PointSet& legit, const spatial::PointSet& eves,
                        const channel::ChannelParams& params, bool allow_low_b) {
    params.validate();
    if (params.gain.kind != channel::GainModel::Kind::unbounded)
        throw std::invalid_argument("build_colluding: requires the unbounded gain g(r) = 1/r^{2b}");
    if (params.gain.b <= 1.0 && !allow_low_b)
        throw std::invalid_argument(
            "build_colluding: b <= 1 makes the aggregate eavesdropper power diverge; "
            "set allow_low_b to accept the truncated sum");
    ISGraph g;
    g.nodes = legit.points;
    const std::size_t n = g.nodes.size();
    g.out.assign(n, {});
    const double b = params.gain.b;
    const double two_rho = std::exp2(params.rho);
    spatial::SpatialIndex legit_idx(legit);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = g.nodes[i];
        double agg = 0.0;  // total received eavesdropper power
        for (const auto& e : eves.points) {
            double d2 = spatial::dist2(p, e);
            agg += d2 > 0.0 ? params.p_ell * std::pow(d2, -b) : kInf;
        }
        double t = (params.sigma2_ell / params.p_ell) * (two_rho * (1.0 + agg / params.sigma2_e) - 1.0);
        if (t <= 0.0) {
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) g.out[i].push_back(static_cast<std::int32_t>(j));
            continue;
        }
        if (t == kInf) continue;
        double rmax = std::pow(t, -0.5 / b) * (1.0 + 1e-9);
        legit_idx.for_each_within(p, rmax, [&](std::size_t j, double d2) {
            if (j == i) return;
            double gl = d2 > 0.0 ? std::pow(d2, -b) : kInf;
            if (gl > t) g.out[i].push_back(static_cast<std::int32_t>(j));
        });
    }
    finalize(g);
    return g;
}

ISGraph build(const spatial::PointSet& legit, const spatial::PointSet& eves,
              const EdgeRule& rule, const channel::ChannelParams& params, std::uint64_t seed) {
    rule.validate();
    switch (rule.kind) {
        case EdgeRule::Kind::baseline:
            return build_baseline(legit, eves);
        case EdgeRule::Kind::fading:
            return build_fading(legit, eves, params, seed);
        case EdgeRule::Kind::threshold:
            return build_threshold(legit, eves, params);
        case EdgeRule::Kind::sectorized:
            return build_sectorized(legit, eves, rule.sectors, {}, seed);
        case EdgeRule::Kind::neutralized:
            return build_neutralized(legit, eves, rule.neutralization_radius);
        case EdgeRule::Kind::colluding:
            return build_colluding(legit, eves, params, rule.allow_low_b);
    }
    throw std::logic_error("build: unknown edge rule");
}

UndirectedGraph weak_projection(const ISGraph& g) {
    UndirectedGraph u;
    u.nodes = g.nodes;
    u.adj.assign(g.size(), {});
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::set_union(g.out[i].begin(), g.out[i].end(), g.in[i].begin(), g.in[i].end(),
                       std::back_inserter(u.adj[i]));
    }
    return u;
}

UndirectedGraph strong_projection(const ISGraph& g) {
    UndirectedGraph u;
    u.nodes = g.nodes;
    u.adj.assign(g.size(), {});
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::set_intersection(g.out[i].begin(), g.out[i].end(), g.in[i].begin(), g.in[i].end(),
                              std::back_inserter(u.adj[i]));
    }
    return u;
}

namespace {

std::vector<std::int32_t> bfs(const std::vector<std::vector<std::int32_t>>& adj,
                              std::int32_t start) {
    std::vector<char> seen(adj.size(), 0);
    std::deque<std::int32_t> q{start};
    seen[static_cast<std::size_t>(start)] = 1;
    std::vector<std::int32_t> out;
    while (!q.empty()) {
        std::int32_t v = q.front();
        q.pop_front();
        out.push_back(v);
        for (std::int32_t w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                q.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::int32_t> component(const ISGraph& g, std::int32_t node, ComponentKind kind) {
    if (node < 0 || static_cast<std::size_t>(node) >= g.size())
        throw std::invalid_argument("component: node out of range");
    switch (kind) {
        case ComponentKind::out: return bfs(g.out, node);
        case ComponentKind::in: return bfs(g.in, node);
        case ComponentKind::weak: return bfs(weak_projection(g).adj, node);
        case ComponentKind::strong: return bfs(strong_projection(g).adj, node);
    }
    throw std::logic_error("component: unknown kind");
}

Degrees degrees(const ISGraph& g) {
    Degrees d;
    d.in.reserve(g.size());
    d.out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        d.in.push_back(static_cast<std::int32_t>(g.in[i].size()));
        d.out.push_back(static_cast<std::int32_t>(g.out[i].size()));
    }
    return d;
}

void write_dump(std::ostream& os, const ISGraph& g) {
    os.precision(17);
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << i << ' ' << g.nodes[i].x << ' ' << g.nodes[i].y;
        for (std::int32_t j : g.out[i]) os << ' ' << j;
        os << '\n';
    }
}

}  // namespace isg::graph
