#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "isg/channel.hpp"
#include "isg/spatial.hpp"

namespace isg::graph {

/// Directed secure-link graph over the legitimate nodes. in_adjacency is
/// maintained as the exact transpose of out_adjacency; there are no
/// self-loops.
struct ISGraph {
    std::vector<spatial::Point2> nodes;
    std::vector<std::vector<std::int32_t>> out;
    std::vector<std::vector<std::int32_t>> in;

    std::size_t size() const { return nodes.size(); }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : out) e += a.size();
        return e;
    }
    /// Rebuild `in` from `out` (sorted ascending, as are the out lists).
    void rebuild_in_adjacency();
};

/// Which of the edge-set definitions builds the graph.
struct EdgeRule {
    enum class Kind { baseline, fading, threshold, sectorized, neutralized, colluding };
    Kind kind = Kind::baseline;
    int sectors = 1;                    // sectorized
    double neutralization_radius = 0.0; // neutralized
    bool allow_low_b = false;           // colluding: accept b <= 1 (divergent tail)

    void validate() const;
};

const char* to_string(EdgeRule::Kind k);

/// rho = 0, path loss only, equal noise: edge x_i -> x_j iff x_j is closer to
/// x_i than x_i's nearest eavesdropper. No eavesdroppers gives the complete
/// graph.
ISGraph build_baseline(const spatial::PointSet& legit, const spatial::PointSet& eves);

/// Edge iff the faded gain to x_j beats the best faded gain to any
/// eavesdropper. Fading draws come from a pair-keyed stream derived from
/// `seed`, so Z_ij = Z_ji by construction and each (transmitter, eavesdropper)
/// pair gets one draw.
ISGraph build_fading(const spatial::PointSet& legit, const spatial::PointSet& eves,
                     const channel::ChannelParams& params, std::uint64_t seed);

/// Deterministic per-pair fading value used by build_fading; exposed so tests
/// can replay the draws. lo/hi are unordered legitimate indices.
double pair_fading(const channel::FadingModel& model, std::uint64_t seed, std::uint32_t lo,
                   std::uint32_t hi);
/// Draw for the (transmitter, eavesdropper) channel.
double eve_fading(const channel::FadingModel& model, std::uint64_t seed, std::uint32_t legit_idx,
                  std::uint32_t eve_idx);

/// Nonzero secrecy threshold and general noise powers, g(r) = 1/r^{2b}:
/// edge iff g(r_ij) > (s2l/s2e) 2^rho g(r_ie*) + (s2l/P)(2^rho - 1) with e*
/// the nearest eavesdropper. Reduces to the baseline rule at rho = 0 and
/// equal noise.
ISGraph build_threshold(const spatial::PointSet& legit, const spatial::PointSet& eves,
                        const channel::ChannelParams& params);

/// L independent transmission sectors per node: only eavesdroppers in the
/// destination's sector count. Offsets may be supplied per node; otherwise
/// they are drawn uniform [0, 2pi) from `seed`.
ISGraph build_sectorized(const spatial::PointSet& legit, const spatial::PointSet& eves,
                         int num_sectors, std::span<const double> offsets, std::uint64_t seed);

/// Baseline rule after removing eavesdroppers within `radius` of any
/// legitimate node.
ISGraph build_neutralized(const spatial::PointSet& legit, const spatial::PointSet& eves,
                          double radius);

/// Colluding eavesdroppers: the eavesdropper side aggregates power from every
/// eavesdropper in the window. Requires b > 1 unless rule.allow_low_b.
ISGraph build_colluding(const spatial::PointSet& legit, const spatial::PointSet& eves,
                        const channel::ChannelParams& params, bool allow_low_b = false);

/// Dispatch on rule.kind.
ISGraph build(const spatial::PointSet& legit, const spatial::PointSet& eves,
              const EdgeRule& rule, const channel::ChannelParams& params, std::uint64_t seed);

/// Undirected projections: weak keeps an edge present in at least one
/// direction, strong only edges present in both.
struct UndirectedGraph {
    std::vector<spatial::Point2> nodes;
    std::vector<std::vector<std::int32_t>> adj;
    std::size_t size() const { return nodes.size(); }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : adj) e += a.size();
        return e / 2;
    }
};

UndirectedGraph weak_projection(const ISGraph& g);
UndirectedGraph strong_projection(const ISGraph& g);

enum class ComponentKind { out, in, weak, strong };
const char* to_string(ComponentKind k);

/// Nodes of the out/in/weak/strong component containing `node` (sorted,
/// always includes `node` itself).
std::vector<std::int32_t> component(const ISGraph& g, std::int32_t node, ComponentKind kind);

struct Degrees {
    std::vector<std::int32_t> in;
    std::vector<std::int32_t> out;
};

Degrees degrees(const ISGraph& g);

/// Line-oriented dump: `node_index x y out_neighbor...` per node.
void write_dump(std::ostream& os, const ISGraph& g);

}  // namespace isg::graph
