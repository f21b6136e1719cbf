#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <stdexcept>

// Seeding and sampling primitives. All distribution transforms are written
// out explicitly (rather than using std:: distributions, whose algorithms are
// implementation-defined) so that a given master seed yields the same sample
// sequence on every build of this code.

namespace isg::rng {

/// SplitMix64 finalizer: a fixed-point-free 64-bit mixing bijection.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Collapse (master seed, stream keys, trial index, ...) into one seed.
/// Every Monte Carlo trial and keyed random stream derives its seed through
/// this mix, so results are independent of execution order.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x8C62F6B2E9F4D1A5ULL;
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
    return h;
}

/// Stream tags keeping independent random substreams from colliding.
enum class Stream : std::uint64_t {
    points = 1,
    fading = 2,
    sector_offsets = 3,
    voronoi = 4,
    bootstrap = 5,
    model_index = 6,
    grid_index = 7,
    window_index = 8,
    thinning = 9,
};

inline std::uint64_t key(Stream s) { return static_cast<std::uint64_t>(s); }

/// Minimal counter-style engine (the SplitMix64 generator). Cheap enough to
/// construct per pair key, which is how per-link fading draws stay reciprocal
/// and order-independent.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

/// Main per-trial engine.
using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

/// Uniform double in [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1], safe as a log() argument.
template <class G>
double uniform01_open0(G& g) {
    return 1.0 - uniform01(g);
}

template <class G>
double uniform(G& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

template <class G>
double exponential(G& g, double rate = 1.0) {
    return -std::log(uniform01_open0(g)) / rate;
}

/// Standard normal via Box-Muller (the cosine branch; one value per call).
template <class G>
double normal(G& g) {
    double u = uniform01_open0(g);
    double v = uniform01(g);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

/// Gamma(shape, scale 1) by Marsaglia-Tsang squeeze; shape >= 0.5 suffices
/// here (Nakagami-m has m >= 0.5). Shapes below 1 use the boost trick
/// Gamma(a) = Gamma(a+1) * U^{1/a}.
template <class G>
double gamma(G& g, double shape) {
    if (shape < 1.0) {
        double u = uniform01_open0(g);
        return gamma(g, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal(g);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform01_open0(g);
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

/// Poisson count by summing unit-rate exponential gaps until they exceed the
/// mean. Exact, numerically safe for any mean, and O(mean) — the same order
/// as generating the points the count is for.
template <class G>
std::int64_t poisson_count(G& g, double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson_count: mean must be >= 0");
    if (mean == 0.0) return 0;
    std::int64_t n = -1;
    double acc = 0.0;
    while (acc <= mean) {
        acc += exponential(g);
        ++n;
    }
    return n;
}

}  // namespace isg::rng
