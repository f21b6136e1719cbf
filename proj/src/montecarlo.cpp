#include "isg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

namespace isg::mc {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::uint64_t trial_seed(const ExperimentConfig& cfg, rng::Stream stream, std::uint64_t a,
                         std::uint64_t b, std::int64_t t) {
    return rng::mix_seed({cfg.master_seed, rng::key(stream), a, b,
                          static_cast<std::uint64_t>(t)});
}
}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(densities.lambda_ell >= 0.0) || !(densities.lambda_e >= 0.0))
        throw std::invalid_argument("config: densities must be >= 0");
    if (!(window.half_side > 0.0)) throw std::invalid_argument("config: window half_side must be > 0");
    if (window.guard_margin >= window.half_side)
        throw std::invalid_argument("config: guard margin must be smaller than half_side");
    if (!(histogram_thinning > 0.0) || histogram_thinning > 1.0)
        throw std::invalid_argument("config: histogram thinning must be in (0, 1]");
    if (neighbor_index < 1) throw std::invalid_argument("config: neighbor index must be >= 1");
    if (!(region_area > 0.0)) throw std::invalid_argument("config: region area must be > 0");
    channel.validate();
    rule.validate();
}

spatial::Window ExperimentConfig::resolved_window() const {
    return resolved_window(window.half_side, densities.lambda_e);
}

spatial::Window ExperimentConfig::resolved_window(double half_side, double lambda_e) const {
    spatial::Window w{half_side, window.guard_margin};
    if (w.guard_margin < 0.0) w.guard_margin = spatial::default_guard_margin(lambda_e);
    if (w.guard_margin >= w.half_side)
        throw std::invalid_argument("config: resolved guard margin does not fit in the window");
    return w;
}

void parallel_for_trials(std::int64_t trials, int workers,
                         const std::function<void(std::int64_t)>& fn) {
    int w = std::max(1, workers);
    if (w == 1 || trials <= 1) {
        for (std::int64_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::int64_t t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Degrees / isolation

namespace {

struct TrialNodeStats {
    double sum_out = 0.0;
    double sum_in = 0.0;
    double interior = 0.0;
    double isolated_out = 0.0;
    double isolated_in = 0.0;
    stats::Histogram out_hist;
    stats::Histogram in_hist;
    std::size_t eves = 0;
};

/// One trial of the generic interior-node pipeline: sample both processes,
/// build the configured graph, record degrees of interior nodes.
TrialNodeStats run_node_trial(const ExperimentConfig& cfg, std::int64_t t,
                              std::uint64_t stream_a, std::uint64_t stream_b) {
    std::uint64_t seed = trial_seed(cfg, rng::Stream::points, stream_a, stream_b, t);
    auto engine = rng::make_engine(seed);
    spatial::Window w = cfg.resolved_window();
    auto legit = spatial::sample_poisson(cfg.densities.lambda_ell, w, engine);
    auto eves = spatial::sample_poisson(cfg.densities.lambda_e, w, engine,
                                        spatial::PointKind::eavesdropper);
    std::uint64_t build_seed = rng::mix_seed({seed, rng::key(rng::Stream::fading)});
    auto g = graph::build(legit, eves, cfg.rule, cfg.channel, build_seed);
    auto deg = graph::degrees(g);

    TrialNodeStats out;
    out.eves = eves.size();
    rng::SplitMix64 thin(rng::mix_seed({seed, rng::key(rng::Stream::thinning)}));
    for (std::size_t i = 0; i < g.size(); ++i) {
        // Thinning draw consumed for every node so the kept set is stable.
        double u = rng::uniform01(thin);
        if (!w.interior(g.nodes[i])) continue;
        out.interior += 1.0;
        out.sum_out += deg.out[i];
        out.sum_in += deg.in[i];
        if (deg.out[i] == 0) out.isolated_out += 1.0;
        if (deg.in[i] == 0) out.isolated_in += 1.0;
        if (u < cfg.histogram_thinning) {
            out.out_hist.add(static_cast<std::size_t>(deg.out[i]));
            out.in_hist.add(static_cast<std::size_t>(deg.in[i]));
        }
    }
    return out;
}

std::vector<TrialNodeStats> run_node_trials(const ExperimentConfig& cfg, std::uint64_t stream_a,
                                            std::uint64_t stream_b) {
    cfg.validate();
    std::vector<TrialNodeStats> per_trial(static_cast<std::size_t>(cfg.trials));
    parallel_for_trials(cfg.trials, cfg.workers, [&](std::int64_t t) {
        per_trial[static_cast<std::size_t>(t)] = run_node_trial(cfg, t, stream_a, stream_b);
    });
    double interior = 0.0;
    std::size_t eves = 0;
    for (const auto& s : per_trial) {
        interior += s.interior;
        eves += s.eves;
    }
    if (interior == 0.0)
        throw DegenerateWindow("no interior nodes in any trial; enlarge the window");
    bool needs_eves = cfg.rule.kind != graph::EdgeRule::Kind::neutralized;
    if (eves == 0 && needs_eves)
        throw DegenerateWindow(
            "no eavesdroppers appeared in any trial; node degrees are unbounded");
    return per_trial;
}

DegreeResult summarize_degrees(const std::vector<TrialNodeStats>& per_trial) {
    DegreeResult r;
    std::vector<double> sums_out, sums_in, counts;
    for (const auto& s : per_trial) {
        sums_out.push_back(s.sum_out);
        sums_in.push_back(s.sum_in);
        counts.push_back(s.interior);
        r.histogram.out_degree.merge(s.out_hist);
        r.histogram.in_degree.merge(s.in_hist);
        r.interior_nodes += static_cast<std::size_t>(s.interior);
    }
    r.mean_out = stats::from_cluster_sums(sums_out, counts);
    r.mean_in = stats::from_cluster_sums(sums_in, counts);
    return r;
}

}  // namespace

DegreeResult estimate_degrees(const ExperimentConfig& cfg) {
    return summarize_degrees(run_node_trials(cfg, 0, 0));
}

IsolationResult estimate_isolation(const ExperimentConfig& cfg) {
    auto per_trial = run_node_trials(cfg, 1, 0);
    IsolationResult r;
    std::vector<double> iso_in, iso_out, counts;
    for (const auto& s : per_trial) {
        iso_in.push_back(s.isolated_in);
        iso_out.push_back(s.isolated_out);
        counts.push_back(s.interior);
        r.interior_nodes += static_cast<std::size_t>(s.interior);
    }
    r.p_in_isol = stats::from_cluster_sums(iso_in, counts);
    r.p_out_isol = stats::from_cluster_sums(iso_out, counts);
    return r;
}

namespace {

/// Stream key derived from the model itself: identical models replay the
/// same trials, distinct models get independent samples (the pairwise tests
/// need independence, not common random numbers).
std::uint64_t fading_model_key(const channel::FadingModel& m) {
    std::uint64_t kind = static_cast<std::uint64_t>(m.kind);
    std::uint64_t p1 = 0, p2 = 0;
    if (m.kind == channel::FadingModel::Kind::nakagami)
        std::memcpy(&p1, &m.nakagami_m, sizeof(double));
    if (m.kind == channel::FadingModel::Kind::lognormal)
        std::memcpy(&p2, &m.sigma_db, sizeof(double));
    return rng::mix_seed({kind, p1, p2});
}

}  // namespace

FadingInvarianceReport fading_invariance_test(const ExperimentConfig& cfg,
                                              std::span<const channel::FadingModel> models) {
    FadingInvarianceReport rep;
    rep.models.assign(models.begin(), models.end());
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        ExperimentConfig c = cfg;
        c.rule.kind = graph::EdgeRule::Kind::fading;
        c.channel.fading = models[mi];
        rep.per_model.push_back(summarize_degrees(run_node_trials(
            c, rng::key(rng::Stream::model_index), fading_model_key(models[mi]))));
    }
    for (std::size_t a = 0; a < models.size(); ++a) {
        for (std::size_t b = a + 1; b < models.size(); ++b) {
            FadingComparison cmp;
            cmp.model_a = a;
            cmp.model_b = b;
            cmp.out_pmf_test = stats::chi2_two_sample(rep.per_model[a].histogram.out_degree,
                                                      rep.per_model[b].histogram.out_degree);
            const auto& ma = rep.per_model[a].mean_in;
            const auto& mb = rep.per_model[b].mean_in;
            double se = std::sqrt(ma.std_error * ma.std_error + mb.std_error * mb.std_error);
            cmp.in_mean_gap_sigmas = se > 0.0 ? std::abs(ma.mean - mb.mean) / se : 0.0;
            rep.pairwise.push_back(cmp);
        }
    }
    return rep;
}

bool FadingInvarianceReport::all_pmf_pass() const {
    for (const auto& c : pairwise)
        if (!c.out_pmf_test.passes(significance)) return false;
    return true;
}

bool FadingInvarianceReport::in_means_agree(double sigmas) const {
    for (const auto& c : pairwise)
        if (c.in_mean_gap_sigmas > sigmas) return false;
    return true;
}

// ---------------------------------------------------------------------------
// MSR outage

MsrOutageResult estimate_msr_outage(const ExperimentConfig& cfg, int neighbor_index,
                                    std::span<const double> rho_grid) {
    cfg.validate();
    if (neighbor_index < 1) throw std::invalid_argument("msr outage: neighbour index >= 1");
    cfg.densities.validate();
    const int i = neighbor_index;
    const double b = cfg.channel.gain.b;
    // Windows sized so the i-th legitimate / first eavesdropper neighbour of
    // the origin lies inside with overwhelming probability.
    const double half_l = std::sqrt((21.0 + 5.0 * i) / (kPi * cfg.densities.lambda_ell));
    const double half_e = std::sqrt(21.0 / (kPi * cfg.densities.lambda_e));
    spatial::Window wl{half_l, 0.0};
    spatial::Window we{half_e, 0.0};

    MsrOutageResult res;
    res.rho_grid.assign(rho_grid.begin(), rho_grid.end());
    std::vector<std::uint8_t> exist(static_cast<std::size_t>(cfg.trials));
    std::vector<std::vector<std::uint8_t>> outage(
        rho_grid.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.trials)));

    parallel_for_trials(cfg.trials, cfg.workers, [&](std::int64_t t) {
        std::uint64_t seed = trial_seed(cfg, rng::Stream::points, 2, 0, t);
        auto engine = rng::make_engine(seed);
        auto legit = spatial::sample_poisson(cfg.densities.lambda_ell, wl, engine);
        while (legit.size() < static_cast<std::size_t>(i))
            legit = spatial::sample_poisson(cfg.densities.lambda_ell, wl, engine);
        auto eves = spatial::sample_poisson(cfg.densities.lambda_e, we, engine,
                                            spatial::PointKind::eavesdropper);
        spatial::SpatialIndex legit_idx(legit);
        double r_l = legit_idx.kth_nearest({0.0, 0.0}, static_cast<std::size_t>(i)).distance;
        double prx_e = 0.0;
        if (!eves.empty()) {
            spatial::SpatialIndex eve_idx(eves);
            double r_e = eve_idx.nearest({0.0, 0.0})->distance;
            prx_e = cfg.channel.p_ell * std::pow(r_e, -2.0 * b);
        }
        double prx_l = cfg.channel.p_ell * std::pow(r_l, -2.0 * b);
        double rate = channel::msr(prx_l, prx_e, cfg.channel.sigma2_ell, cfg.channel.sigma2_ell);
        exist[static_cast<std::size_t>(t)] = rate > 0.0 ? 1 : 0;
        for (std::size_t g = 0; g < res.rho_grid.size(); ++g)
            outage[g][static_cast<std::size_t>(t)] = rate <= res.rho_grid[g] ? 1 : 0;
    });

    auto count = [](const std::vector<std::uint8_t>& v) {
        std::size_t c = 0;
        for (auto x : v) c += x;
        return c;
    };
    res.existence = stats::proportion(count(exist), static_cast<std::size_t>(cfg.trials));
    res.outage.reserve(rho_grid.size());
    for (std::size_t g = 0; g < rho_grid.size(); ++g)
        res.outage.push_back(
            stats::proportion(count(outage[g]), static_cast<std::size_t>(cfg.trials)));
    return res;
}

// ---------------------------------------------------------------------------
// Percolation

namespace {

/// Disjoint-set over node indices.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)])
            rank_[static_cast<std::size_t>(a)]++;
    }

  private:
    std::vector<std::int32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

/// Does a directed BFS from `start` reach any node satisfying `touch`?
bool bfs_touches(const std::vector<std::vector<std::int32_t>>& adj, std::int32_t start,
                 const std::vector<std::uint8_t>& touch) {
    if (touch[static_cast<std::size_t>(start)]) return true;
    std::vector<char> seen(adj.size(), 0);
    std::vector<std::int32_t> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        std::int32_t v = stack.back();
        stack.pop_back();
        for (std::int32_t w : adj[static_cast<std::size_t>(v)]) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            if (touch[static_cast<std::size_t>(w)]) return true;
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
        }
    }
    return false;
}

std::array<bool, 4> percolation_touches(const graph::ISGraph& g, const spatial::Window& w) {
    const std::size_t n = g.size();
    std::vector<std::uint8_t> touch(n, 0);
    for (std::size_t i = 0; i < n; ++i) touch[i] = w.touches_boundary(g.nodes[i]) ? 1 : 0;

    std::array<bool, 4> result{};
    result[static_cast<std::size_t>(graph::ComponentKind::out)] = bfs_touches(g.out, 0, touch);
    result[static_cast<std::size_t>(graph::ComponentKind::in)] = bfs_touches(g.in, 0, touch);

    UnionFind weak(n), strong(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::int32_t j : g.out[i]) {
            weak.unite(static_cast<std::int32_t>(i), j);
            if (static_cast<std::size_t>(j) > i &&
                std::binary_search(g.out[static_cast<std::size_t>(j)].begin(),
                                   g.out[static_cast<std::size_t>(j)].end(),
                                   static_cast<std::int32_t>(i)))
                strong.unite(static_cast<std::int32_t>(i), j);
        }
    }
    std::int32_t weak_root = weak.find(0);
    std::int32_t strong_root = strong.find(0);
    bool weak_touch = false, strong_touch = false;
    for (std::size_t i = 0; i < n && !(weak_touch && strong_touch); ++i) {
        if (!touch[i]) continue;
        if (!weak_touch && weak.find(static_cast<std::int32_t>(i)) == weak_root) weak_touch = true;
        if (!strong_touch && strong.find(static_cast<std::int32_t>(i)) == strong_root)
            strong_touch = true;
    }
    result[static_cast<std::size_t>(graph::ComponentKind::weak)] = weak_touch;
    result[static_cast<std::size_t>(graph::ComponentKind::strong)] = strong_touch;
    return result;
}

}  // namespace

stats::SummaryStats PercolationCell::p_infinity(graph::ComponentKind kind) const {
    return stats::proportion(touches[static_cast<std::size_t>(kind)], trials);
}

const PercolationCell& PercolationTable::cell(std::size_t window_idx,
                                              std::size_t lambda_idx) const {
    return cells.at(window_idx * lambda_grid.size() + lambda_idx);
}

std::vector<stats::SummaryStats> PercolationTable::row(std::size_t window_idx,
                                                       graph::ComponentKind kind) const {
    std::vector<stats::SummaryStats> out;
    for (std::size_t l = 0; l < lambda_grid.size(); ++l)
        out.push_back(cell(window_idx, l).p_infinity(kind));
    return out;
}

stats::CrossingEstimate PercolationTable::crossing(std::size_t window_idx,
                                                   graph::ComponentKind kind, double level,
                                                   std::uint64_t seed) const {
    std::vector<std::size_t> succ, total;
    for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
        const auto& c = cell(window_idx, l);
        succ.push_back(c.touches[static_cast<std::size_t>(kind)]);
        total.push_back(c.trials);
    }
    return stats::crossing_with_bootstrap(lambda_grid, succ, total, level,
                                          rng::mix_seed({seed, rng::key(rng::Stream::bootstrap)}));
}

PercolationTable estimate_percolation(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.lambda_grid.empty()) throw std::invalid_argument("percolation: empty lambda grid");
    if (cfg.window_ladder.empty()) throw std::invalid_argument("percolation: empty window ladder");

    PercolationTable table;
    table.window_ladder = cfg.window_ladder;
    table.lambda_grid = cfg.lambda_grid;
    table.cells.resize(cfg.window_ladder.size() * cfg.lambda_grid.size());

    for (std::size_t wi = 0; wi < cfg.window_ladder.size(); ++wi) {
        spatial::Window w = cfg.resolved_window(cfg.window_ladder[wi], cfg.densities.lambda_e);
        for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
            double lambda_ell = cfg.lambda_grid[li];
            PercolationCell& cell = table.cells[wi * cfg.lambda_grid.size() + li];
            cell.window_half = w.half_side;
            cell.lambda_ell = lambda_ell;
            cell.trials = static_cast<std::size_t>(cfg.trials);
            std::vector<std::array<std::uint8_t, 4>> hits(
                static_cast<std::size_t>(cfg.trials), std::array<std::uint8_t, 4>{});
            parallel_for_trials(cfg.trials, cfg.workers, [&](std::int64_t t) {
                std::uint64_t seed = trial_seed(cfg, rng::Stream::grid_index, wi, li, t);
                auto engine = rng::make_engine(seed);
                auto legit = spatial::sample_poisson(lambda_ell, w, engine);
                // Palm conditioning: the probe participates in the graph.
                legit.points.insert(legit.points.begin(), spatial::Point2{0.0, 0.0});
                auto eves = spatial::sample_poisson(cfg.densities.lambda_e, w, engine,
                                                    spatial::PointKind::eavesdropper);
                auto g = graph::build(legit, eves, cfg.rule, cfg.channel,
                                      rng::mix_seed({seed, rng::key(rng::Stream::fading)}));
                auto touched = percolation_touches(g, w);
                for (std::size_t k = 0; k < 4; ++k)
                    hits[static_cast<std::size_t>(t)][k] = touched[k] ? 1 : 0;
            });
            for (const auto& h : hits)
                for (std::size_t k = 0; k < 4; ++k) cell.touches[k] += h[k];
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Full connectivity

FullConnectivityResult estimate_full_connectivity(const ExperimentConfig& cfg) {
    cfg.validate();
    const double region_half = 0.5 * std::sqrt(cfg.region_area);
    spatial::Window w = cfg.resolved_window();
    if (w.half_side <= region_half)
        throw std::invalid_argument("full connectivity: window must contain the region");

    std::vector<std::uint8_t> out_con(static_cast<std::size_t>(cfg.trials));
    std::vector<std::uint8_t> in_con(static_cast<std::size_t>(cfg.trials));
    parallel_for_trials(cfg.trials, cfg.workers, [&](std::int64_t t) {
        std::uint64_t seed = trial_seed(cfg, rng::Stream::points, 3, 0, t);
        auto engine = rng::make_engine(seed);
        auto legit = spatial::sample_poisson(cfg.densities.lambda_ell, w, engine);
        legit.points.insert(legit.points.begin(), spatial::Point2{0.0, 0.0});
        auto eves = spatial::sample_poisson(cfg.densities.lambda_e, w, engine,
                                            spatial::PointKind::eavesdropper);
        auto g = graph::build(legit, eves, cfg.rule, cfg.channel,
                              rng::mix_seed({seed, rng::key(rng::Stream::fading)}));

        std::vector<std::uint8_t> in_region(g.size(), 0);
        for (std::size_t i = 0; i < g.size(); ++i)
            in_region[i] = (std::abs(g.nodes[i].x) <= region_half &&
                            std::abs(g.nodes[i].y) <= region_half)
                               ? 1
                               : 0;

        auto reaches_all = [&](const std::vector<std::vector<std::int32_t>>& adj) {
            std::vector<char> seen(g.size(), 0);
            std::vector<std::int32_t> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                std::int32_t v = stack.back();
                stack.pop_back();
                for (std::int32_t nb : adj[static_cast<std::size_t>(v)]) {
                    if (!seen[static_cast<std::size_t>(nb)]) {
                        seen[static_cast<std::size_t>(nb)] = 1;
                        stack.push_back(nb);
                    }
                }
            }
            for (std::size_t i = 0; i < g.size(); ++i)
                if (in_region[i] && !seen[i]) return false;
            return true;
        };
        out_con[static_cast<std::size_t>(t)] = reaches_all(g.out) ? 1 : 0;
        in_con[static_cast<std::size_t>(t)] = reaches_all(g.in) ? 1 : 0;
    });

    auto count = [](const std::vector<std::uint8_t>& v) {
        std::size_t c = 0;
        for (auto x : v) c += x;
        return c;
    };
    FullConnectivityResult r;
    r.p_out_con = stats::proportion(count(out_con), static_cast<std::size_t>(cfg.trials));
    r.p_in_con = stats::proportion(count(in_con), static_cast<std::size_t>(cfg.trials));
    return r;
}

// ---------------------------------------------------------------------------
// Window sizing helpers

double neutralization_guard_margin(double lambda_ell, double lambda_e, double rho) {
    if (lambda_e <= 0.0) return 0.0;
    double survivor = lambda_e * std::exp(-kPi * lambda_ell * rho * rho);
    return std::sqrt(rho * rho + std::log(1e3) / (kPi * survivor));
}

double colluding_guard_margin(double b, double lambda_e, double tail_fraction, double cap) {
    if (lambda_e <= 0.0) return 0.0;
    // Expected aggregate power beyond a half-plane at distance D:
    //   lambda_e * sqrt(pi) * Gamma(b - 1/2) / Gamma(b) * D^{2-2b} / (2b - 2);
    // compared against the median nearest-eavesdropper power (pi lambda_e / ln 2)^b.
    double coeff = lambda_e * std::sqrt(kPi) * std::tgamma(b - 0.5) / std::tgamma(b) /
                   (2.0 * b - 2.0);
    double median_power = std::pow(kPi * lambda_e / std::log(2.0), b);
    double d = std::pow(coeff / (tail_fraction * median_power), 1.0 / (2.0 * b - 2.0));
    return std::min(d, cap);
}

}  // namespace isg::mc
