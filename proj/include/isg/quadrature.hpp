#pragma once

#include <functional>
#include <stdexcept>

namespace isg::quad {

struct ToleranceNotMet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    /// An improper upper limit is first truncated where the integrand has
    /// fallen below this fraction of its running peak...
    double tail_cutoff = 1e-12;
    /// ...then the limit is extended (doubled) until two successive
    /// truncations agree within tolerance, up to this many extensions.
    int max_extensions = 40;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_cutoff > 0.0))
            throw std::invalid_argument("quadrature spec: tolerances must be > 0");
    }
};

/// Adaptive Gauss-Kronrod integral of f over the finite interval [a, b].
/// Throws ToleranceNotMet when the error estimate stays above tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Integral of f over [a, +inf) for integrands that eventually decay:
/// scans forward for the truncation point per `spec`, then extends until two
/// successive truncations agree.
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const QuadratureSpec& spec = {});

}  // namespace isg::quad
