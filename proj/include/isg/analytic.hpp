#pragma once

#include <cstdint>
#include <span>

#include "isg/channel.hpp"
#include "isg/quadrature.hpp"
#include "isg/stats.hpp"

namespace isg::analytic {

struct DensityPair {
    double lambda_ell = 1.0;
    double lambda_e = 0.1;

    double ratio() const { return lambda_ell / lambda_e; }
    void validate() const;
};

/// Geometric out-degree law: P{N_out = n} = (l/(l+e))^n * (e/(l+e)).
double out_degree_pmf(std::int64_t n, const DensityPair& d);

/// E{N_in} = E{N_out} = lambda_ell / lambda_e.
double avg_degree(const DensityPair& d);

/// P{N_out = 0} = lambda_e / (lambda_ell + lambda_e).
double p_out_isol(const DensityPair& d);

/// P{N_in = 0} = E{exp(-(l/e) * A)} estimated over typical-Voronoi-cell area
/// samples; returns the sample mean with its standard error.
stats::SummaryStats p_in_isol(const DensityPair& d, std::span<const double> voronoi_samples);

/// Stirling numbers of the second kind, exact. Throws std::overflow_error
/// past n = 20 rather than approximating.
std::uint64_t stirling2(int n, int k);

/// E{N_in^n} = sum_k (l/e)^k S(n,k) E{A^k}; voronoi_moments[k-1] = E{A^k}.
double in_degree_moment(int n, const DensityPair& d, std::span<const double> voronoi_moments);

/// Average degree under secrecy threshold rho and general noise powers with
/// g(r) = 1/r^{2b}, by quadrature over the nearest-eavesdropper distance law.
double avg_degree_threshold(const DensityPair& d, const channel::ChannelParams& params,
                            const quad::QuadratureSpec& spec = {});

/// L * lambda_ell / lambda_e.
double avg_degree_sectorized(const DensityPair& d, int num_sectors);

/// Lower bound (l/e) * (pi*e*rho^2 + exp(pi*e*rho^2)) on the average degree
/// with neutralization radius rho.
double avg_degree_neutralized_lb(const DensityPair& d, double rho);

/// (l/e) * sinc(1/b) for colluding eavesdroppers; requires b > 1.
double avg_degree_colluding(const DensityPair& d, double b);

double sinc(double x);

/// CDF P{R_S,i <= rho} of the maximum secrecy rate to the i-th closest
/// neighbour, from the distance laws (squared i-th legitimate distance is
/// Erlang(i, pi*l); squared nearest-eavesdropper distance is Exp(pi*e)).
double msr_cdf(double rho, int i, const DensityPair& d, double b, double snr,
               const quad::QuadratureSpec& spec = {});

/// P{R_S,i > 0} = (l/(l+e))^i.
double p_exist(int i, const DensityPair& d);

/// Largest secrecy threshold admitting percolation: log2(1 + P*g0/sigma2).
double rho_max(double p, double gain_at_zero, double sigma2);

/// Asymptotic upper bound on full in-connectivity over a region of area A:
/// 1 - 6*pi/(8*pi + 3*sqrt(3)) * (1 - exp(-lambda_e * A)).
double in_conn_upper_bound(double lambda_e, double area);

}  // namespace isg::analytic
