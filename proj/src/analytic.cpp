#include "isg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace isg::analytic {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void DensityPair::validate() const {
    if (!(lambda_ell > 0.0) || !(lambda_e > 0.0))
        throw std::invalid_argument("density pair: both densities must be > 0");
}

double out_degree_pmf(std::int64_t n, const DensityPair& d) {
    d.validate();
    if (n < 0) throw std::invalid_argument("out_degree_pmf: n must be >= 0");
    double p = d.lambda_ell / (d.lambda_ell + d.lambda_e);
    return std::pow(p, static_cast<double>(n)) * (1.0 - p);
}

double avg_degree(const DensityPair& d) {
    d.validate();
    return d.ratio();
}

double p_out_isol(const DensityPair& d) {
    d.validate();
    return d.lambda_e / (d.lambda_ell + d.lambda_e);
}

stats::SummaryStats p_in_isol(const DensityPair& d, std::span<const double> voronoi_samples) {
    d.validate();
    if (voronoi_samples.empty())
        throw std::invalid_argument("p_in_isol: need at least one Voronoi area sample");
    std::vector<double> vals;
    vals.reserve(voronoi_samples.size());
    double r = d.ratio();
    for (double a : voronoi_samples) vals.push_back(std::exp(-r * a));
    return stats::from_samples(vals);
}

std::uint64_t stirling2(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("stirling2: need 1 <= k <= n");
    if (n > 20) throw std::overflow_error("stirling2: exact evaluation supported up to n = 20");
    // S(n,k) = k*S(n-1,k) + S(n-1,k-1), S(n,1) = S(n,n) = 1.
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[1] = 1;
    for (int r = 2; r <= n; ++r)
        for (int c = std::min(r, k); c >= 1; --c)
            row[static_cast<std::size_t>(c)] =
                static_cast<std::uint64_t>(c) * row[static_cast<std::size_t>(c)] +
                row[static_cast<std::size_t>(c - 1)];
    return row[static_cast<std::size_t>(k)];
}

double in_degree_moment(int n, const DensityPair& d, std::span<const double> voronoi_moments) {
    d.validate();
    if (n < 1) throw std::invalid_argument("in_degree_moment: n must be >= 1");
    if (voronoi_moments.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("in_degree_moment: need Voronoi moments up to order n");
    double sum = 0.0;
    double r = d.ratio();
    for (int k = 1; k <= n; ++k)
        sum += std::pow(r, k) * static_cast<double>(stirling2(n, k)) * voronoi_moments[k - 1];
    return sum;
}

double avg_degree_threshold(const DensityPair& d, const channel::ChannelParams& params,
                            const quad::QuadratureSpec& spec) {
    d.validate();
    params.validate();
    if (params.gain.kind != channel::GainModel::Kind::unbounded)
        throw std::invalid_argument("avg_degree_threshold: defined for g(r) = 1/r^{2b}");
    const double b = params.gain.b;
    // Derived from the threshold edge rule: an edge reaches x_j iff
    // r_ij^2 < x / (c1 + c2 x^b)^{1/b} with x the squared distance to the
    // nearest eavesdropper (Exp(pi*lambda_e) law), so
    //   E{N} = pi^2 l e * Int_0^inf x exp(-pi e x) / (c1 + c2 x^b)^{1/b} dx.
    const double c1 = (params.sigma2_ell / params.sigma2_e) * std::exp2(params.rho);
    const double c2 = (params.sigma2_ell / params.p_ell) * (std::exp2(params.rho) - 1.0);
    const double le = d.lambda_e;
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        return x * std::exp(-kPi * le * x) / std::pow(c1 + c2 * std::pow(x, b), 1.0 / b);
    };
    double integral = quad::integrate_to_inf(f, 0.0, spec);
    return kPi * kPi * d.lambda_ell * d.lambda_e * integral;
}

double avg_degree_sectorized(const DensityPair& d, int num_sectors) {
    d.validate();
    if (num_sectors < 1) throw std::invalid_argument("avg_degree_sectorized: L must be >= 1");
    return num_sectors * d.ratio();
}

double avg_degree_neutralized_lb(const DensityPair& d, double rho) {
    d.validate();
    if (rho < 0.0) throw std::invalid_argument("avg_degree_neutralized_lb: rho must be >= 0");
    double a = kPi * d.lambda_e * rho * rho;
    return d.ratio() * (a + std::exp(a));
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

double avg_degree_colluding(const DensityPair& d, double b) {
    d.validate();
    if (!(b > 1.0)) throw std::invalid_argument("avg_degree_colluding: requires b > 1");
    return d.ratio() * sinc(1.0 / b);
}

double msr_cdf(double rho, int i, const DensityPair& d, double b, double snr,
               const quad::QuadratureSpec& spec) {
    d.validate();
    if (i < 1) throw std::invalid_argument("msr_cdf: neighbour index must be >= 1");
    if (rho < 0.0) throw std::invalid_argument("msr_cdf: rho must be >= 0");
    if (!(b > 0.0) || !(snr > 0.0)) throw std::invalid_argument("msr_cdf: need b > 0 and snr > 0");
    // R_S,i > rho  <=>  U < u*(V), with U = R_{l,i}^2 ~ Erlang(i, pi*l),
    // V = R_{e,1}^2 ~ Exp(pi*e),
    // u*(v) = [ (2^rho - 1)/snr + 2^rho v^{-b} ]^{-1/b}.
    const double rate_l = kPi * d.lambda_ell;
    const double rate_e = kPi * d.lambda_e;
    const double a = (std::exp2(rho) - 1.0) / snr;
    const double c = std::exp2(rho);
    auto integrand = [&](double v) {
        if (v <= 0.0) return 0.0;
        double ustar = std::pow(a + c * std::pow(v, -b), -1.0 / b);
        double inner = stats::gamma_cdf(static_cast<double>(i), rate_l * ustar);
        return rate_e * std::exp(-rate_e * v) * inner;
    };
    double p_above = quad::integrate_to_inf(integrand, 0.0, spec);
    double cdf = 1.0 - p_above;
    return std::clamp(cdf, 0.0, 1.0);
}

double p_exist(int i, const DensityPair& d) {
    d.validate();
    if (i < 1) throw std::invalid_argument("p_exist: neighbour index must be >= 1");
    return std::pow(d.lambda_ell / (d.lambda_ell + d.lambda_e), i);
}

double rho_max(double p, double gain_at_zero, double sigma2) {
    if (p < 0.0 || !(sigma2 > 0.0)) throw std::invalid_argument("rho_max: bad parameters");
    if (std::isinf(gain_at_zero) && p > 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(1.0 + p * gain_at_zero / sigma2);
}

double in_conn_upper_bound(double lambda_e, double area) {
    if (lambda_e < 0.0 || area < 0.0)
        throw std::invalid_argument("in_conn_upper_bound: bad parameters");
    const double c = 6.0 * kPi / (8.0 * kPi + 3.0 * std::sqrt(3.0));
    return 1.0 - c * (1.0 - std::exp(-lambda_e * area));
}

}  // namespace isg::analytic
