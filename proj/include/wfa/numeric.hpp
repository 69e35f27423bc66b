#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace wfa {

// Solver failures (as opposed to bad input, which is std::invalid_argument).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Plain bisection on a sign change; f(a) and f(b) must differ in sign.
template <class F>
double bisect(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a);
    for (int i = 0; i < max_iter && std::abs(b - a) > xtol; ++i) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Bracketed root by TOMS 748, to full double precision.
template <class F>
double solve_bracketed(F&& f, double a, double b) {
    if (a > b) std::swap(a, b);
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw NumericError("solve_bracketed: no sign change");
    std::uintmax_t it = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
    return 0.5 * (r.first + r.second);
}

// Safeguarded Newton inside [lo, hi]; fd returns (f, f').
template <class FD>
double newton_bracketed(FD&& fd, double guess, double lo, double hi) {
    std::uintmax_t it = 100;
    return boost::math::tools::newton_raphson_iterate(fd, guess, lo, hi, 50, it);
}

}  // namespace wfa
