#pragma once

// Reference implementations used only by the tests. None of them share code
// with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

/// Lanczos approximation (g = 7, n = 9), about 15 digits for x > 0.5.
inline double lanczos_gamma(double x) {
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    x -= 1.0;
    double a = coef[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) {
        a += coef[i] / (x + i);
    }
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline double bessel_k(double nu, double z) { return boost::math::cyl_bessel_k(nu, z); }
inline double bessel_i(double nu, double z) { return boost::math::cyl_bessel_i(nu, z); }

/// z K_nu'(z) / K_nu(z) from the recurrence K_nu' = -K_{nu-1} - (nu/z) K_nu.
inline double bessel_k_logderiv(double nu, double z) {
    return -z * boost::math::cyl_bessel_k(nu - 1.0, z) / boost::math::cyl_bessel_k(nu, z) - nu;
}

inline double k_half(double z) {
    return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
}

/// Plain bisection on a sign change; 200 halvings.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 0.0; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) {
            break;
        }
        const double fm = f(m);
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240601);
    return gen;
}

inline double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng());
}

inline double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
}

} // namespace oracle
