#pragma once

#include <cstdint>
#include <stdexcept>

#include "isg/rng.hpp"

namespace isg::channel {

/// Distance-dependent power gain. `unbounded` is z / r^{2b}; `bounded` is
/// z / (1 + r^{2b}), which removes the singularity at r = 0. b is the
/// amplitude loss exponent (power falls off as r^{-2b}).
struct GainModel {
    enum class Kind { unbounded, bounded };
    Kind kind = Kind::unbounded;
    double b = 2.0;
    /// Lift the 0.8 <= b <= 4 plausibility check.
    bool allow_any_b = false;

    void validate() const;
    /// g(0) with unit fading: infinite for the unbounded model, 1 for bounded.
    double gain_at_zero() const;
};

/// Multiplicative propagation effect Z, normalized so E{Z} = 1 for every
/// variant. Nakagami-m maps to a Gamma(m, 1/m) power gain; the log-normal
/// model is parameterized by the dB-domain standard deviation.
struct FadingModel {
    enum class Kind { deterministic_unity, rayleigh, nakagami, lognormal };
    Kind kind = Kind::deterministic_unity;
    double nakagami_m = 1.0;
    double sigma_db = 8.0;

    void validate() const;
    bool is_deterministic() const { return kind == Kind::deterministic_unity; }
};

struct ChannelParams {
    double p_ell = 10.0;       // common transmit power (linear)
    double sigma2_ell = 1.0;   // legitimate receiver noise power
    double sigma2_e = 1.0;     // eavesdropper noise power
    double rho = 0.0;          // secrecy rate threshold (bits/complex dim)
    GainModel gain;
    FadingModel fading;

    void validate() const;
    double snr() const { return p_ell / sigma2_ell; }
};

/// Power gain at link length r with fading value z.
/// Throws std::domain_error at r = 0 for the unbounded model.
double gain(double r, double z, const GainModel& model);

/// P_rx = p_ell * gain(r, z).
double received_power(const ChannelParams& params, double r, double z);

/// Maximum secrecy rate [log2(1 + prx_l/sigma2_l) - log2(1 + prx_e/sigma2_e)]^+
/// in bits per complex dimension. prx_eve may be 0 (no eavesdropper) or
/// infinity (eavesdropper at the transmitter).
double msr(double prx_legit, double prx_eve, double sigma2_ell, double sigma2_e);

/// One fading draw. Mean 1 for every model.
template <class G>
double sample_fading(const FadingModel& model, G& g) {
    switch (model.kind) {
        case FadingModel::Kind::deterministic_unity:
            return 1.0;
        case FadingModel::Kind::rayleigh:
            // Rayleigh amplitude <=> Exp(1) power gain.
            return rng::exponential(g);
        case FadingModel::Kind::nakagami:
            return rng::gamma(g, model.nakagami_m) / model.nakagami_m;
        case FadingModel::Kind::lognormal: {
            double sigma = model.sigma_db * 0.23025850929940457;  // ln(10)/10
            return std::exp(sigma * rng::normal(g) - 0.5 * sigma * sigma);
        }
    }
    throw std::logic_error("sample_fading: unknown model");
}

double sample_fading(const FadingModel& model, std::uint64_t seed);

}  // namespace isg::channel
