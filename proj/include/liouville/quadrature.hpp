#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>

namespace liouville::quad {

struct Result {
    double value = 0;
    double error = 0;
    double l1 = 0;
    std::size_t levels = 0;
};

inline boost::math::quadrature::tanh_sinh<double>& de_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

/// Double-exponential rule on [a,b]. The integrand receives (x, xc) where
/// xc = a - x on the left half and b - x on the right half, so endpoint
/// distances are available without cancellation.
template <class F>
Result tanh_sinh(F&& f, double a, double b, double tol) {
    Result r;
    if (a == b) return r;
    // work on [-1, 1]: short intervals far from the origin keep their resolution
    const double h = 0.5 * (b - a);
    auto g = [&](double u, double uc) {
        const double xc = h * uc;
        const double x = u < 0 ? a - xc : b - xc;
        return f(x, xc);
    };
    r.value = h * de_rule().integrate(g, -1.0, 1.0, tol, &r.error, &r.l1, &r.levels);
    r.error *= std::abs(h);
    r.l1 *= std::abs(h);
    return r;
}

/// Fixed 30-point Gauss-Legendre on [a,b], composite over `pieces` panels.
template <class F>
double gauss_legendre(F&& f, double a, double b, int pieces = 1) {
    double h = (b - a) / pieces, sum = 0;
    for (int k = 0; k < pieces; ++k) {
        double lo = a + k * h;
        sum += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, lo + h);
    }
    return sum;
}

}  // namespace liouville::quad
