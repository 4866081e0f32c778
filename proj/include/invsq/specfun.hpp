#pragma once

// Modified Bessel functions of real order 0 <= nu <= 1 and the Gamma ratio
// that appears in the renormalized bound-state momentum.
//
// K_nu is evaluated with Temme's series for z < 2 and Steed's continued
// fraction (CF2) for z >= 2. Both paths produce K_mu and K_{mu+1} for
// |mu| <= 1/2; orders above 1/2 are reached with one upward recurrence.
// I_nu is summed from its power series, which has only positive terms for
// nu > -1 and is therefore independent of the K evaluation.

namespace invsq::specfun {

/// Bessel order restricted to [0, 1].
class Order {
public:
    explicit Order(double nu);
    double value() const noexcept { return nu_; }
    bool is_zero() const noexcept { return nu_ == 0.0; }

private:
    double nu_;
};

/// Crossover between the small-argument series and the continued fraction.
inline constexpr double kSeriesCrossover = 2.0;

/// Orders closer than this to 1 are rejected by closed-form operations,
/// since Gamma(1 - nu) has a pole at nu = 1.
inline constexpr double kUpperOrderGuard = 1e-9;

double bessel_k(Order nu, double z);

/// e^z K_nu(z); finite for large z where K_nu itself underflows.
double bessel_k_scaled(Order nu, double z);

/// dK_nu/dz.
double bessel_k_deriv(Order nu, double z);

/// z K_nu'(z) / K_nu(z). Negative for all z > 0.
double bessel_k_logderiv(Order nu, double z);

/// z K_nu'(z) / K_nu(z) + nu = -z K_{1-nu}(z) / K_nu(z).
///
/// The shifted form avoids the cancellation between -nu and the log
/// derivative at small z, where the spectral equations live.
double bessel_k_logderiv_excess(Order nu, double z);

/// Leading small-argument form of K_nu: the two-term connection-formula
/// expansion for 0 < nu < 1, Gamma(nu)/2 (2/z)^nu at nu = 1, -ln z at nu = 0.
double bessel_k_smallz(Order nu, double z);

/// I_nu(z) for -1 < nu <= 2 (negative orders are needed by the connection
/// formula, orders above 1 by derivatives).
double bessel_i(double nu, double z);

/// dI_nu/dz for -1 < nu <= 1.
double bessel_i_deriv(double nu, double z);

/// Gamma(1 + nu) / Gamma(1 - nu) for 0 < nu < 1.
double gamma_ratio(Order nu);

/// 1 / Gamma(1 + x) for |x| <= 1 from its Taylor series.
double rgamma1p(double x);

} // namespace invsq::specfun
