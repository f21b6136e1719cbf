#include "isg/channel.hpp"

#include <cmath>
#include <limits>

namespace isg::channel {

void GainModel::validate() const {
    if (!(b > 0.0)) throw std::invalid_argument("gain model: b must be > 0");
    if (!allow_any_b && (b < 0.8 || b > 4.0))
        throw std::invalid_argument(
            "gain model: amplitude loss exponent outside [0.8, 4]; set allow_any_b to override");
}

double GainModel::gain_at_zero() const {
    return kind == Kind::bounded ? 1.0 : std::numeric_limits<double>::infinity();
}

void FadingModel::validate() const {
    if (kind == Kind::nakagami && !(nakagami_m >= 0.5))
        throw std::invalid_argument("fading model: Nakagami m must be >= 0.5");
    if (kind == Kind::lognormal && !(sigma_db > 0.0))
        throw std::invalid_argument("fading model: log-normal sigma_dB must be > 0");
}

void ChannelParams::validate() const {
    if (!(p_ell > 0.0)) throw std::invalid_argument("channel: p_ell must be > 0");
    if (!(sigma2_ell > 0.0)) throw std::invalid_argument("channel: sigma2_ell must be > 0");
    if (!(sigma2_e > 0.0)) throw std::invalid_argument("channel: sigma2_e must be > 0");
    if (!(rho >= 0.0)) throw std::invalid_argument("channel: rho must be >= 0");
    gain.validate();
    fading.validate();
}

double gain(double r, double z, const GainModel& model) {
    if (!(z > 0.0)) throw std::invalid_argument("gain: fading value must be > 0");
    if (model.kind == GainModel::Kind::unbounded) {
        if (r <= 0.0) throw std::domain_error("gain: unbounded model is singular at r = 0");
        return z * std::pow(r, -2.0 * model.b);
    }
    if (r < 0.0) throw std::invalid_argument("gain: negative distance");
    return z / (1.0 + std::pow(r, 2.0 * model.b));
}

double received_power(const ChannelParams& params, double r, double z) {
    return params.p_ell * gain(r, z, params.gain);
}

double msr(double prx_legit, double prx_eve, double sigma2_ell, double sigma2_e) {
    double rate = std::log2(1.0 + prx_legit / sigma2_ell) - std::log2(1.0 + prx_eve / sigma2_e);
    return rate > 0.0 ? rate : 0.0;
}

double sample_fading(const FadingModel& model, std::uint64_t seed) {
    rng::SplitMix64 g(seed);
    return sample_fading(model, g);
}

}  // namespace isg::channel
