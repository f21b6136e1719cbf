#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "isg/channel.hpp"

using namespace isg;
using channel::ChannelParams;
using channel::FadingModel;
using channel::GainModel;

TEST_CASE("gain: direct substitutions") {
    GainModel unb{GainModel::Kind::unbounded, 2.0};
    CHECK(channel::gain(1.0, 1.0, unb) == doctest::Approx(1.0));
    CHECK(channel::gain(2.0, 1.0, unb) == doctest::Approx(0.0625));
    GainModel bnd{GainModel::Kind::bounded, 1.3, true};
    CHECK(channel::gain(0.0, 1.0, bnd) == doctest::Approx(1.0));
    CHECK_THROWS_AS(channel::gain(0.0, 1.0, unb), std::domain_error);
}

TEST_CASE("gain: strictly decreasing in r for both variants") {
    for (double b : {0.8, 1.0, 2.0, 4.0}) {
        for (auto kind : {GainModel::Kind::unbounded, GainModel::Kind::bounded}) {
            GainModel m{kind, b};
            double prev = channel::gain(1e-3, 1.0, m);
            for (int i = 1; i <= 1000; ++i) {
                double r = 1e-3 + i * 0.02;
                double g = channel::gain(r, 1.0, m);
                CHECK(g < prev);
                prev = g;
            }
        }
    }
}

TEST_CASE("gain model validation: b range with override") {
    GainModel m{GainModel::Kind::unbounded, 0.5};
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.allow_any_b = true;
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("received_power: substitution and linear scaling") {
    ChannelParams p;
    p.p_ell = 10.0;
    p.gain = GainModel{GainModel::Kind::unbounded, 1.0};
    CHECK(channel::received_power(p, 1.0, 1.0) == doctest::Approx(10.0));

    p.gain.b = 2.0;
    CHECK(channel::received_power(p, 2.0, 0.5) == doctest::Approx(0.3125));

    ChannelParams doubled = p;
    doubled.p_ell = 20.0;
    for (double r : {0.3, 1.7, 4.2})
        CHECK(channel::received_power(doubled, r, 0.8) ==
              doctest::Approx(2.0 * channel::received_power(p, r, 0.8)));
}

TEST_CASE("msr: trivial identities") {
    CHECK(channel::msr(3.0, 3.0, 1.0, 1.0) == 0.0);
    CHECK(channel::msr(5.0, 0.0, 1.0, 1.0) == doctest::Approx(std::log2(6.0)));
    CHECK(channel::msr(3.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
    // Sign of the unclamped difference decides positivity.
    CHECK(channel::msr(2.0, 1.9, 1.0, 1.0) > 0.0);
    CHECK(channel::msr(1.9, 2.0, 1.0, 1.0) == 0.0);
    // Infinite eavesdropper power floors the rate at zero.
    CHECK(channel::msr(5.0, std::numeric_limits<double>::infinity(), 1.0, 1.0) == 0.0);
}

TEST_CASE("sample_fading: deterministic unity") {
    FadingModel m{FadingModel::Kind::deterministic_unity};
    for (std::uint64_t s = 0; s < 5; ++s) CHECK(channel::sample_fading(m, s) == 1.0);
}

TEST_CASE("sample_fading: every variant has unit mean") {
    const int n = 100000;
    for (auto model : {FadingModel{FadingModel::Kind::rayleigh},
                       FadingModel{FadingModel::Kind::nakagami, 3.0},
                       FadingModel{FadingModel::Kind::nakagami, 0.7},
                       FadingModel{FadingModel::Kind::lognormal, 1.0, 8.0}}) {
        auto g = rng::make_engine(33);
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double z = channel::sample_fading(model, g);
            CHECK(z > 0.0);
            sum += z;
            sum2 += z * z;
        }
        double mean = sum / n;
        double var = sum2 / n - mean * mean;
        CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(var / n));
    }
}

TEST_CASE("sample_fading: rayleigh moments match Exp(1)") {
    auto g = rng::make_engine(12);
    FadingModel m{FadingModel::Kind::rayleigh};
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = channel::sample_fading(m, g);
        sum += z;
        sum2 += z * z;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 3.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(8.0 / n));  // Var of Exp(1) variance est.
}

TEST_CASE("sample_fading: nakagami(m=1) equals rayleigh in distribution (KS)") {
    const int n = 100000;
    std::vector<double> a(n), b(n);
    auto g1 = rng::make_engine(101), g2 = rng::make_engine(202);
    FadingModel nak{FadingModel::Kind::nakagami, 1.0};
    FadingModel ray{FadingModel::Kind::rayleigh};
    for (int i = 0; i < n; ++i) {
        a[i] = channel::sample_fading(nak, g1);
        b[i] = channel::sample_fading(ray, g2);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // Two-sample KS statistic by merging sorted samples.
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / n));
    }
    // alpha = 0.01 critical value: 1.628 * sqrt(2/n).
    CHECK(d < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("fading validation") {
    FadingModel bad_nak{FadingModel::Kind::nakagami, 0.2};
    CHECK_THROWS_AS(bad_nak.validate(), std::invalid_argument);
    FadingModel bad_ln{FadingModel::Kind::lognormal, 1.0, 0.0};
    CHECK_THROWS_AS(bad_ln.validate(), std::invalid_argument);
}

TEST_CASE("channel params validation") {
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.sigma2_e = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
