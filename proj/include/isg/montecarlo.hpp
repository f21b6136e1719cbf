#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isg/analytic.hpp"
#include "isg/channel.hpp"
#include "isg/graph.hpp"
#include "isg/spatial.hpp"
#include "isg/stats.hpp"

namespace isg::mc {

/// No usable statistics could be collected (no interior nodes, or an edge
/// rule that needs eavesdroppers never saw one).
struct DegenerateWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VoronoiOptions {
    std::size_t samples = 4000;
    std::size_t test_points = 10000;
    double half_side = 6.0;
};

/// One fully resolved experiment. All estimators derive per-trial seeds from
/// (master_seed, stream, trial), so results are independent of worker count
/// and scheduling.
struct ExperimentConfig {
    analytic::DensityPair densities;
    channel::ChannelParams channel;
    graph::EdgeRule rule;
    spatial::Window window{10.0, -1.0};  // guard_margin < 0 picks the default
    std::int64_t trials = 100;
    std::uint64_t master_seed = 1;
    int workers = 1;

    // Estimator-specific knobs.
    double histogram_thinning = 1.0;   // degree histograms: keep-probability
    int neighbor_index = 1;            // MSR: i-th closest neighbour
    std::vector<double> rho_grid;      // MSR outage grid
    std::vector<double> lambda_grid;   // percolation: legitimate densities
    std::vector<double> window_ladder; // percolation: window half-sides
    double region_area = 1.0;          // full connectivity region area
    VoronoiOptions voronoi;

    void validate() const;
    /// Window with the guard margin resolved (default keeps the probability
    /// that an interior node's nearest eavesdropper falls outside the window
    /// below 1e-3).
    spatial::Window resolved_window() const;
    spatial::Window resolved_window(double half_side, double lambda_e) const;
};

/// Run fn(t) for t in [0, trials) on `workers` threads. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_for_trials(std::int64_t trials, int workers,
                         const std::function<void(std::int64_t)>& fn);

struct DegreeHistogram {
    stats::Histogram out_degree;
    stats::Histogram in_degree;
};

struct DegreeResult {
    DegreeHistogram histogram;  // thinned per histogram_thinning
    stats::SummaryStats mean_in;
    stats::SummaryStats mean_out;
    std::size_t interior_nodes = 0;  // all interior nodes (before thinning)
};

DegreeResult estimate_degrees(const ExperimentConfig& cfg);

struct IsolationResult {
    stats::SummaryStats p_in_isol;
    stats::SummaryStats p_out_isol;
    std::size_t interior_nodes = 0;
};

IsolationResult estimate_isolation(const ExperimentConfig& cfg);

struct MsrOutageResult {
    std::vector<double> rho_grid;
    std::vector<stats::SummaryStats> outage;  // P{R_S,i <= rho} per grid point
    stats::SummaryStats existence;            // P{R_S,i > 0}
};

/// Palm estimator: a probe at the origin, fresh processes per trial, MSR to
/// the i-th closest legitimate neighbour via the nearest-eavesdropper law.
MsrOutageResult estimate_msr_outage(const ExperimentConfig& cfg, int neighbor_index,
                                    std::span<const double> rho_grid);

struct PercolationCell {
    double window_half = 0.0;
    double lambda_ell = 0.0;
    std::size_t trials = 0;
    // Trials in which the probe's component reached the boundary annulus.
    std::array<std::size_t, 4> touches{};  // indexed by ComponentKind

    stats::SummaryStats p_infinity(graph::ComponentKind kind) const;
};

struct PercolationTable {
    std::vector<double> window_ladder;
    std::vector<double> lambda_grid;
    std::vector<PercolationCell> cells;  // row-major: window major, lambda minor

    const PercolationCell& cell(std::size_t window_idx, std::size_t lambda_idx) const;
    /// p_infinity estimates for one component kind on one window.
    std::vector<stats::SummaryStats> row(std::size_t window_idx,
                                         graph::ComponentKind kind) const;
    /// Isotonic 0.5-crossing on the given window with bootstrap interval.
    stats::CrossingEstimate crossing(std::size_t window_idx, graph::ComponentKind kind,
                                     double level, std::uint64_t seed) const;
};

/// Boundary-reaching percolation probabilities for all four component kinds
/// over cfg.lambda_grid x cfg.window_ladder.
PercolationTable estimate_percolation(const ExperimentConfig& cfg);

struct FullConnectivityResult {
    stats::SummaryStats p_out_con;
    stats::SummaryStats p_in_con;
};

/// Probe at the origin of a region of cfg.region_area (a centered square);
/// out-connected when the probe reaches every legitimate node of the region,
/// in-connected when every such node reaches the probe.
FullConnectivityResult estimate_full_connectivity(const ExperimentConfig& cfg);

struct FadingComparison {
    std::size_t model_a = 0;
    std::size_t model_b = 0;
    stats::Chi2Result out_pmf_test;
    double in_mean_gap_sigmas = 0.0;  // |mean_a - mean_b| / combined SE
};

struct FadingInvarianceReport {
    std::vector<channel::FadingModel> models;
    std::vector<DegreeResult> per_model;
    std::vector<FadingComparison> pairwise;
    double significance = 0.01;

    bool all_pmf_pass() const;
    bool in_means_agree(double sigmas = 3.0) const;
};

/// Out-degree PMF invariance across fading models (pairwise two-sample
/// chi-squared) plus agreement of the in-degree means.
FadingInvarianceReport fading_invariance_test(const ExperimentConfig& cfg,
                                              std::span<const channel::FadingModel> models);

/// Guard margin for neutralized-rule runs: accounts for the thinned survivor
/// process (intensity about lambda_e * exp(-pi lambda_ell rho^2)), so the
/// nearest surviving eavesdropper of an interior node stays in-window with
/// probability 1 - 1e-3.
double neutralization_guard_margin(double lambda_ell, double lambda_e, double rho);

/// Guard margin for colluding-rule runs: distance at which the expected
/// out-of-window aggregate power drops below `tail_fraction` of the median
/// nearest-eavesdropper power, capped at `cap` (the exact rule is infeasibly
/// wide near b = 1.5; the residual truncation bias is then ~1-2%).
double colluding_guard_margin(double b, double lambda_e, double tail_fraction = 1e-3,
                              double cap = 25.0);

}  // namespace isg::mc
