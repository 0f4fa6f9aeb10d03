#pragma once

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rosenau::quadrature {

/// Adaptive 61-point Gauss-Kronrod on [a, b]. Terminates when the error
/// estimate drops below max(abs_tol, rel_tol * |I|).
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-13,
                 unsigned max_depth = 30) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    if (a == b)
        return 0.0;
    // Boost's criterion is relative; bisect manually so the absolute floor is honoured.
    double error = 0.0;
    double l1 = 0.0;
    const double value = GK::integrate(f, a, b, 0, rel_tol, &error, &l1);
    if (error <= abs_tol || error <= rel_tol * std::abs(value) || max_depth == 0)
        return value;
    const double mid = 0.5 * (a + b);
    return integrate(f, a, mid, 0.5 * abs_tol, rel_tol, max_depth - 1) +
           integrate(f, mid, b, 0.5 * abs_tol, rel_tol, max_depth - 1);
}

} // namespace rosenau::quadrature
