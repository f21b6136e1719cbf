#include "isg/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isg/rng.hpp"

namespace isg::stats {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

SummaryStats from_samples(std::span<const double> xs) {
    SummaryStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std_error = s.n > 1 ? std::sqrt(ss / (static_cast<double>(s.n) * (s.n - 1.0))) : 0.0;
    s.ci_lo = s.mean - kZ95 * s.std_error;
    s.ci_hi = s.mean + kZ95 * s.std_error;
    return s;
}

SummaryStats from_cluster_sums(std::span<const double> sums, std::span<const double> counts) {
    if (sums.size() != counts.size())
        throw std::invalid_argument("from_cluster_sums: size mismatch");
    SummaryStats s;
    double S = 0.0, N = 0.0;
    std::size_t used = 0;
    for (std::size_t t = 0; t < sums.size(); ++t) {
        S += sums[t];
        N += counts[t];
        if (counts[t] > 0) ++used;
    }
    s.n = static_cast<std::size_t>(N);
    if (N == 0.0) return s;
    s.mean = S / N;
    // Cluster-robust variance of the ratio estimator: residuals S_t - mean*n_t.
    if (used > 1) {
        double ss = 0.0;
        for (std::size_t t = 0; t < sums.size(); ++t) {
            double resid = sums[t] - s.mean * counts[t];
            ss += resid * resid;
        }
        double T = static_cast<double>(sums.size());
        s.std_error = std::sqrt(ss * T / (T - 1.0)) / N;
    }
    s.ci_lo = s.mean - kZ95 * s.std_error;
    s.ci_hi = s.mean + kZ95 * s.std_error;
    return s;
}

SummaryStats proportion(std::size_t successes, std::size_t n) {
    SummaryStats s;
    s.n = n;
    if (n == 0) return s;
    double p = static_cast<double>(successes) / static_cast<double>(n);
    s.mean = p;
    s.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    std::size_t failures = n - successes;
    if (successes >= 10 && failures >= 10) {
        s.ci_lo = p - kZ95 * s.std_error;
        s.ci_hi = p + kZ95 * s.std_error;
    } else {
        // Wilson score interval.
        double z2 = kZ95 * kZ95;
        double denom = 1.0 + z2 / n;
        double center = (p + z2 / (2.0 * n)) / denom;
        double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        s.ci_lo = center - half;
        s.ci_hi = center + half;
        // Keep std_error meaningful when p is 0 or 1.
        if (s.std_error == 0.0) s.std_error = half / kZ95;
    }
    return s;
}

void Histogram::add(std::size_t value) {
    if (value >= counts.size()) counts.resize(value + 1, 0);
    counts[value]++;
    total++;
}

void Histogram::merge(const Histogram& other) {
    if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

double chi2_sf(double statistic, std::size_t dof) {
    if (dof == 0) return 1.0;
    return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

double gamma_cdf(double a, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(a, x);
}

Chi2Result chi2_gof(const Histogram& hist, const std::vector<double>& pmf, double min_expected) {
    if (hist.total == 0) throw std::invalid_argument("chi2_gof: empty histogram");
    const double n = static_cast<double>(hist.total);
    // Pool the upper tail so each cell has expected count >= min_expected.
    std::vector<double> expected;
    std::vector<double> observed;
    double tail_p = 1.0;
    std::size_t k = 0;
    for (; k < pmf.size(); ++k) {
        double e = n * pmf[k];
        if (tail_p * n - e < min_expected || e < min_expected) break;
        expected.push_back(e);
        observed.push_back(k < hist.counts.size() ? static_cast<double>(hist.counts[k]) : 0.0);
        tail_p -= pmf[k];
    }
    // Tail cell: everything from k on.
    double tail_obs = 0.0;
    for (std::size_t v = k; v < hist.counts.size(); ++v) tail_obs += static_cast<double>(hist.counts[v]);
    expected.push_back(tail_p * n);
    observed.push_back(tail_obs);

    Chi2Result r;
    for (std::size_t c = 0; c < expected.size(); ++c) {
        double d = observed[c] - expected[c];
        r.statistic += d * d / expected[c];
    }
    r.dof = expected.size() - 1;
    r.p_value = chi2_sf(r.statistic, r.dof);
    return r;
}

Chi2Result chi2_two_sample(const Histogram& a, const Histogram& b, double min_expected) {
    if (a.total == 0 || b.total == 0)
        throw std::invalid_argument("chi2_two_sample: empty histogram");
    std::size_t width = std::max(a.counts.size(), b.counts.size());
    auto at = [](const Histogram& h, std::size_t i) {
        return i < h.counts.size() ? static_cast<double>(h.counts[i]) : 0.0;
    };
    const double na = static_cast<double>(a.total), nb = static_cast<double>(b.total);
    const double ntot = na + nb;
    // Pool bins left-to-right until both rows' expected counts clear the bar.
    std::vector<std::pair<double, double>> cells;
    double ca = 0.0, cb = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
        ca += at(a, i);
        cb += at(b, i);
        double col = ca + cb;
        if (col * na / ntot >= min_expected && col * nb / ntot >= min_expected) {
            cells.push_back({ca, cb});
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (!cells.empty()) {
            cells.back().first += ca;
            cells.back().second += cb;
        } else {
            cells.push_back({ca, cb});
        }
    }
    Chi2Result r;
    if (cells.size() < 2) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    for (const auto& [oa, ob] : cells) {
        double col = oa + ob;
        double ea = col * na / ntot;
        double eb = col * nb / ntot;
        r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    r.dof = cells.size() - 1;
    r.p_value = chi2_sf(r.statistic, r.dof);
    return r;
}

std::vector<double> isotonic_fit(std::span<const double> ys, std::span<const double> weights) {
    if (ys.size() != weights.size())
        throw std::invalid_argument("isotonic_fit: size mismatch");
    // Pool-adjacent-violators.
    struct Block {
        double mean;
        double weight;
        std::size_t len;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        blocks.push_back({ys[i], weights[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            Block b = blocks.back();
            blocks.pop_back();
            Block& a = blocks.back();
            double w = a.weight + b.weight;
            a.mean = (a.mean * a.weight + b.mean * b.weight) / w;
            a.weight = w;
            a.len += b.len;
        }
    }
    std::vector<double> out;
    out.reserve(ys.size());
    for (const auto& b : blocks) out.insert(out.end(), b.len, b.mean);
    return out;
}

double crossing_point(std::span<const double> xs, std::span<const double> ys, double level) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("crossing_point: bad input");
    if (ys.front() >= level) return xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (ys[i] >= level) {
            double run = ys[i] - ys[i - 1];
            if (run <= 0.0) return xs[i];
            return xs[i - 1] + (level - ys[i - 1]) / run * (xs[i] - xs[i - 1]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

CrossingEstimate crossing_with_bootstrap(std::span<const double> xs,
                                         std::span<const std::size_t> successes,
                                         std::span<const std::size_t> trials, double level,
                                         std::uint64_t seed, int n_boot) {
    if (xs.size() != successes.size() || xs.size() != trials.size())
        throw std::invalid_argument("crossing_with_bootstrap: size mismatch");
    std::vector<double> p(xs.size()), w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        p[i] = trials[i] ? static_cast<double>(successes[i]) / trials[i] : 0.0;
        w[i] = static_cast<double>(trials[i]);
    }
    CrossingEstimate est;
    est.crossing = crossing_point(xs, isotonic_fit(p, w), level);

    std::vector<double> boots;
    boots.reserve(static_cast<std::size_t>(n_boot));
    auto eng = rng::make_engine(seed);
    std::vector<double> pb(xs.size());
    for (int bidx = 0; bidx < n_boot; ++bidx) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::size_t hits = 0;
            for (std::size_t t = 0; t < trials[i]; ++t)
                if (rng::uniform01(eng) < p[i]) ++hits;
            pb[i] = trials[i] ? static_cast<double>(hits) / trials[i] : 0.0;
        }
        double c = crossing_point(xs, isotonic_fit(pb, w), level);
        if (std::isfinite(c)) boots.push_back(c);
    }
    if (boots.empty()) {
        est.ci_lo = est.ci_hi = est.crossing;
        return est;
    }
    std::sort(boots.begin(), boots.end());
    auto pick = [&](double q) {
        double idx = q * (boots.size() - 1);
        return boots[static_cast<std::size_t>(idx + 0.5)];
    };
    est.ci_lo = pick(0.025);
    est.ci_hi = pick(0.975);
    return est;
}

}  // namespace isg::stats
