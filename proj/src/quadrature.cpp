#include "isg/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace isg::quad {

namespace {
using Kernel = boost::math::quadrature::gauss_kronrod<double, 15>;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return 0.0;
    double err = 0.0;
    double val = Kernel::integrate(f, a, b, 18, spec.rel_tol, &err);
    if (!(std::isfinite(val)))
        throw ToleranceNotMet("quadrature: integral did not evaluate to a finite value");
    if (err > spec.rel_tol * std::max(std::abs(val), 1.0) && err > spec.abs_tol)
        throw ToleranceNotMet("quadrature: error estimate above tolerance");
    return val;
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const QuadratureSpec& spec) {
    spec.validate();
    // Scan forward on a doubling grid for the point where the integrand has
    // decayed below tail_cutoff relative to the largest value seen.
    double peak = 0.0;
    double upper = std::max(1.0, std::abs(a) * 2.0);
    const double start = a;
    int scans = 0;
    for (; scans < spec.max_extensions; ++scans) {
        // Probe a few interior points of [start, upper] plus the endpoint.
        double window = upper - start;
        for (double frac : {0.25, 0.5, 0.75, 1.0})
            peak = std::max(peak, std::abs(f(start + frac * window)));
        double tail = std::abs(f(upper));
        if (peak > 0.0 && tail < spec.tail_cutoff * peak) break;
        upper *= 2.0;
    }
    if (scans == spec.max_extensions)
        throw ToleranceNotMet("quadrature: integrand does not decay on [a, inf)");

    double prev = integrate(f, start, upper, spec);
    for (int ext = 0; ext < spec.max_extensions; ++ext) {
        double next_upper = upper * 2.0;
        double cur = prev + integrate(f, upper, next_upper, spec);
        bool converged = std::abs(cur - prev) <=
                         std::max(spec.rel_tol * std::abs(cur), spec.abs_tol);
        prev = cur;
        upper = next_upper;
        if (converged) return cur;
    }
    throw ToleranceNotMet("quadrature: truncated integrals did not stabilize");
}

}  // namespace isg::quad
