#include "invsq/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "invsq/errors.hpp"

namespace invsq::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(1 + x) (Abramowitz & Stegun 6.1.34, shifted).
constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

void require_positive(double z, const char* fn) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                          std::to_string(z));
    }
}

// Temme's auxiliary Gamma combinations for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
// Split into odd and even parts of the series so gam1 has no cancellation.
struct TemmeGammas {
    double gam1;
    double gam2;
    double gampl; // 1/Gamma(1+mu)
    double gammi; // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu) {
    const double mu2 = mu * mu;
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t j = kRecipGamma.size(); j-- > 0;) {
        if (j % 2 == 1) {
            odd = odd * mu2 + kRecipGamma[j];
        } else {
            even = even * mu2 + kRecipGamma[j];
        }
    }
    // odd holds sum_j b_{2j+1} mu^{2j}; even holds sum_j b_{2j} mu^{2j}.
    return {-odd, even, even + mu * odd, even - mu * odd};
}

struct ScaledPair {
    double k_nu;  // e^x K_nu(x)
    double k_nu1; // e^x K_{nu+1}(x)
};

ScaledPair temme_series(double mu, double x) {
    const double mu2 = mu * mu;
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);

    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        const double di = i;
        ff = (di * ff + p + q) / (di * di - mu2);
        c *= d / di;
        p /= di - mu;
        q /= di + mu;
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - di * ff);
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    if (i > kMaxIter) {
        throw NumericalError("bessel_k: Temme series did not converge", "x=" + std::to_string(x));
    }
    const double scale = std::exp(x);
    return {sum * scale, sum1 * (2.0 / x) * scale};
}

ScaledPair steed_cf2(double mu, double x) {
    const double a1 = 0.25 - mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) {
            break;
        }
    }
    if (i > kMaxIter) {
        throw NumericalError("bessel_k: continued fraction did not converge",
                             "x=" + std::to_string(x));
    }
    h *= a1;
    const double kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    return {kmu, kmu * (mu + x + 0.5 - h) / x};
}

// e^x K_nu(x) and e^x K_{nu+1}(x) for 0 <= nu <= 1.
ScaledPair k_pair_scaled(double nu, double x) {
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    ScaledPair pair = x < kSeriesCrossover ? temme_series(mu, x) : steed_cf2(mu, x);
    for (int i = 1; i <= nl; ++i) {
        const double next = (mu + i) * (2.0 / x) * pair.k_nu1 + pair.k_nu;
        pair.k_nu = pair.k_nu1;
        pair.k_nu1 = next;
    }
    if (!std::isfinite(pair.k_nu) || !std::isfinite(pair.k_nu1)) {
        throw RangeError("bessel_k: overflow at z=" + std::to_string(x));
    }
    return pair;
}

} // namespace

Order::Order(double nu) : nu_(nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw DomainError("Bessel order must lie in [0, 1], got " + std::to_string(nu));
    }
}

double rgamma1p(double x) {
    if (!(std::abs(x) <= 1.0)) {
        throw DomainError("rgamma1p: |x| must not exceed 1");
    }
    double acc = 0.0;
    for (std::size_t j = kRecipGamma.size(); j-- > 0;) {
        acc = acc * x + kRecipGamma[j];
    }
    return acc;
}

double bessel_k_scaled(Order nu, double z) {
    require_positive(z, "bessel_k_scaled");
    return k_pair_scaled(nu.value(), z).k_nu;
}

double bessel_k(Order nu, double z) {
    require_positive(z, "bessel_k");
    return k_pair_scaled(nu.value(), z).k_nu * std::exp(-z);
}

double bessel_k_deriv(Order nu, double z) {
    require_positive(z, "bessel_k_deriv");
    const ScaledPair p = k_pair_scaled(nu.value(), z);
    return (nu.value() / z * p.k_nu - p.k_nu1) * std::exp(-z);
}

double bessel_k_logderiv_excess(Order nu, double z) {
    require_positive(z, "bessel_k_logderiv");
    const double k_nu = k_pair_scaled(nu.value(), z).k_nu;
    const double k_comp = k_pair_scaled(1.0 - nu.value(), z).k_nu;
    return -z * k_comp / k_nu;
}

double bessel_k_logderiv(Order nu, double z) {
    return bessel_k_logderiv_excess(nu, z) - nu.value();
}

double bessel_k_smallz(Order nu, double z) {
    require_positive(z, "bessel_k_smallz");
    const double v = nu.value();
    if (nu.is_zero()) {
        return -std::log(z);
    }
    const double half = 0.5 * z;
    if (v >= 1.0 - kUpperOrderGuard) {
        // Gamma(1 - nu) pole: only the singular leading term survives.
        return 0.5 * std::tgamma(v) * std::pow(half, -v);
    }
    const double pref = std::numbers::pi / (2.0 * std::sin(v * std::numbers::pi));
    return pref * (std::pow(half, -v) / std::tgamma(1.0 - v) - std::pow(half, v) / std::tgamma(1.0 + v));
}

double bessel_i(double nu, double z) {
    require_positive(z, "bessel_i");
    if (!(nu > -1.0 && nu <= 2.0)) {
        throw DomainError("bessel_i: order must lie in (-1, 2], got " + std::to_string(nu));
    }
    const double q = 0.25 * z * z;
    double term = std::pow(0.5 * z, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (term < sum * kEps) {
            if (!std::isfinite(sum)) {
                throw RangeError("bessel_i: overflow at z=" + std::to_string(z));
            }
            return sum;
        }
    }
    throw NumericalError("bessel_i: series did not converge", "z=" + std::to_string(z));
}

double bessel_i_deriv(double nu, double z) {
    if (!(nu > -1.0 && nu <= 1.0)) {
        throw DomainError("bessel_i_deriv: order must lie in (-1, 1], got " + std::to_string(nu));
    }
    return bessel_i(nu + 1.0, z) + nu / z * bessel_i(nu, z);
}

double gamma_ratio(Order nu) {
    const double v = nu.value();
    if (nu.is_zero()) {
        throw DomainError("gamma_ratio: nu = 0 has its own logarithmic branch");
    }
    if (v >= 1.0 - kUpperOrderGuard) {
        throw DomainError("gamma_ratio: Gamma(1 - nu) has a pole at nu = 1");
    }
    return std::tgamma(1.0 + v) / std::tgamma(1.0 - v);
}

} // namespace invsq::specfun
