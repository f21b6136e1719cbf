#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace isg::stats {

/// Monte Carlo estimate with its sampling uncertainty.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;

    bool contains(double v) const { return v >= ci_lo && v <= ci_hi; }
};

/// Plain iid sample mean with normal 95% interval.
SummaryStats from_samples(std::span<const double> xs);

/// Ratio estimator sum(S_t)/sum(n_t) over clusters (trials), with a
/// cluster-robust standard error. Used whenever per-node statistics are
/// pooled across Monte Carlo trials, since nodes within one trial are
/// spatially correlated.
SummaryStats from_cluster_sums(std::span<const double> sums, std::span<const double> counts);

/// Proportion successes/n with normal interval, falling back to Wilson when
/// either successes or failures are below 10.
SummaryStats proportion(std::size_t successes, std::size_t n);

/// Pooled histogram counts per integer value (index = value).
struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::size_t value);
    void merge(const Histogram& other);
};

struct Chi2Result {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;

    bool passes(double significance) const { return p_value >= significance; }
};

/// Pearson goodness-of-fit of `hist` against the fully specified pmf(k),
/// with the tail pooled so every expected count is at least `min_expected`.
Chi2Result chi2_gof(const Histogram& hist, const std::vector<double>& pmf,
                    double min_expected = 5.0);

/// Two-sample chi-squared homogeneity test on two histograms of the same
/// quantity, bins pooled until expected counts reach `min_expected`.
Chi2Result chi2_two_sample(const Histogram& a, const Histogram& b, double min_expected = 5.0);

/// Upper tail of the chi-squared distribution.
double chi2_sf(double statistic, std::size_t dof);

/// Regularized lower incomplete gamma P(a, x) (the Erlang/Gamma CDF).
double gamma_cdf(double a, double x);

/// Least-squares monotone (nondecreasing) fit by pool-adjacent-violators.
std::vector<double> isotonic_fit(std::span<const double> ys, std::span<const double> weights);

/// First crossing of `level` by the piecewise-linear interpolant of
/// (xs, isotonic ys). Returns NaN when the fit never reaches the level.
double crossing_point(std::span<const double> xs, std::span<const double> ys, double level);

struct CrossingEstimate {
    double crossing = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// 0.5-crossing of an isotonic fit of per-point success proportions, with a
/// percentile bootstrap interval over binomial resamples.
CrossingEstimate crossing_with_bootstrap(std::span<const double> xs,
                                         std::span<const std::size_t> successes,
                                         std::span<const std::size_t> trials, double level,
                                         std::uint64_t seed, int n_boot = 400);

}  // namespace isg::stats
