#include <doctest.h>

#include <cmath>
#include <numbers>

#include "invsq/errors.hpp"
#include "invsq/specfun.hpp"
#include "oracles.hpp"

using namespace invsq;
using specfun::Order;

TEST_SUITE("specfun") {

TEST_CASE("order validates its range") {
    CHECK_NOTHROW(Order(0.0));
    CHECK_NOTHROW(Order(1.0));
    CHECK_THROWS_AS(Order(-0.01), DomainError);
    CHECK_THROWS_AS(Order(1.01), DomainError);
    CHECK_THROWS_AS(Order(std::nan("")), DomainError);
    CHECK(Order(0.0).is_zero());
}

TEST_CASE("K_nu reference values") {
    CHECK(specfun::bessel_k(Order(0.5), 1.0) ==
          doctest::Approx(std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0)).epsilon(1e-14));
    CHECK(specfun::bessel_k(Order(0.5), 1.0) == doctest::Approx(0.4610685044).epsilon(1e-10));
    // -ln(z/2) - gamma_E plus O(z^2 ln z)
    CHECK(specfun::bessel_k(Order(0.0), 1e-6) == doctest::Approx(13.93144).epsilon(1e-6));
    CHECK(specfun::bessel_k(Order(0.0), 1e-6) ==
          doctest::Approx(-std::log(0.5e-6) - std::numbers::egamma).epsilon(1e-11));
    CHECK(specfun::bessel_k(Order(1.0), 2.0) == doctest::Approx(0.1398658818).epsilon(1e-10));
}

TEST_CASE("K_nu against an independent implementation") {
    for (double nu : {0.0, 0.1, 0.25, 0.3333, 0.5, 0.6, 0.75, 0.9, 0.999, 1.0}) {
        for (double z : {1e-8, 1e-5, 1e-3, 0.1, 0.5, 1.0, 1.999, 2.0, 2.001, 5.0, 12.0, 30.0, 50.0}) {
            const double ref = oracle::bessel_k(nu, z);
            INFO("nu=" << nu << " z=" << z);
            CHECK(oracle::rel(specfun::bessel_k(Order(nu), z), ref) < 1e-12);
        }
    }
}

TEST_CASE("K_nu is positive and decreasing") {
    for (double nu : {0.0, 0.4, 1.0}) {
        double prev = specfun::bessel_k(Order(nu), 1e-8);
        for (double z = 1e-8; z < 50.0; z *= 1.3) {
            const double v = specfun::bessel_k(Order(nu), z * 1.3);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("K_{1/2} closed form over the working range") {
    for (double z = 1e-6; z <= 30.0; z *= 1.7) {
        CHECK(oracle::rel(specfun::bessel_k(Order(0.5), z), oracle::k_half(z)) < 1e-12);
    }
}

TEST_CASE("scaled K stays finite where K underflows") {
    const double z = 800.0;
    CHECK(specfun::bessel_k(Order(0.3), z) == 0.0);
    const double scaled = specfun::bessel_k_scaled(Order(0.5), z);
    CHECK(scaled == doctest::Approx(std::sqrt(std::numbers::pi / (2.0 * z))).epsilon(1e-13));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), 0.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_k(Order(0.5), -1.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_k_logderiv(Order(0.5), 0.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_i(1.5, -1.0), DomainError);
}

TEST_CASE("overflow below the representable range") {
    CHECK_THROWS_AS(specfun::bessel_k(Order(1.0), 1e-310), RangeError);
}

TEST_CASE("log derivative") {
    CHECK(specfun::bessel_k_logderiv(Order(0.5), 1.0) == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(specfun::bessel_k_logderiv(Order(0.5), 0.25) == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(std::abs(specfun::bessel_k_logderiv(Order(0.75), 1e-7) + 0.75) < 1e-4);
    for (double nu : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        for (double z : {1e-6, 1e-3, 0.3, 1.0, 3.0, 20.0}) {
            const double v = specfun::bessel_k_logderiv(Order(nu), z);
            INFO("nu=" << nu << " z=" << z);
            CHECK(v < 0.0);
            CHECK(oracle::rel(v, oracle::bessel_k_logderiv(nu, z)) < 1e-11);
        }
    }
}

TEST_CASE("log derivative limits") {
    // Large z: -z - 1/2 + O(1/z).
    const double z = 1e3;
    CHECK(std::abs(specfun::bessel_k_logderiv(Order(0.3), z) + z + 0.5) < 1e-3);
    // nu = 0: tends to 1 / ln(z e^gamma / 2).
    const double small = 1e-8;
    CHECK(specfun::bessel_k_logderiv(Order(0.0), small) ==
          doctest::Approx(1.0 / std::log(small * std::exp(std::numbers::egamma) / 2.0))
              .epsilon(1e-6));
    // |logderiv + nu| decreases monotonically toward 0 as z -> 0.
    for (double nu : {0.1, 0.5, 0.9, 1.0}) {
        double prev = 1.0;
        for (double zz : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
            const double gap = std::abs(specfun::bessel_k_logderiv(Order(nu), zz) + nu);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("log derivative excess avoids cancellation") {
    for (double nu : {0.1, 0.5, 0.9}) {
        for (double z : {1e-8, 1e-4, 0.5, 4.0}) {
            const double excess = specfun::bessel_k_logderiv_excess(Order(nu), z);
            const double ref = -z * oracle::bessel_k(1.0 - nu, z) / oracle::bessel_k(nu, z);
            CHECK(oracle::rel(excess, ref) < 1e-12);
        }
    }
}

TEST_CASE("derivative against a central difference") {
    for (double nu : {0.0, 0.35, 1.0}) {
        for (double z : {0.05, 0.7, 3.0}) {
            const double h = 1e-5 * z;
            const double fd = (specfun::bessel_k(Order(nu), z + h) -
                               specfun::bessel_k(Order(nu), z - h)) /
                              (2.0 * h);
            CHECK(oracle::rel(specfun::bessel_k_deriv(Order(nu), z), fd) < 1e-8);
        }
    }
}

TEST_CASE("I_nu against an independent implementation") {
    for (double nu : {-0.9, -0.5, -0.1, 0.0, 0.3, 0.5, 1.0, 1.7}) {
        for (double z : {1e-6, 0.01, 0.7, 3.0, 15.0}) {
            INFO("nu=" << nu << " z=" << z);
            CHECK(oracle::rel(specfun::bessel_i(nu, z), oracle::bessel_i(nu, z)) < 1e-13);
        }
    }
}

TEST_CASE("Wronskian I K' - I' K = -1/z") {
    for (int i = 0; i < 100; ++i) {
        const double nu = oracle::uniform(0.0, 1.0);
        const double z = oracle::log_uniform(1e-4, 20.0);
        const Order o(nu);
        const double w = specfun::bessel_i(nu, z) * specfun::bessel_k_deriv(o, z) -
                         specfun::bessel_i_deriv(nu, z) * specfun::bessel_k(o, z);
        INFO("nu=" << nu << " z=" << z);
        CHECK(oracle::rel(w, -1.0 / z) < 1e-10);
    }
}

TEST_CASE("connection formula") {
    for (double nu : {0.1, 0.3, 0.5, 0.77, 0.95}) {
        for (double z : {1e-3, 0.2, 1.0, 6.0}) {
            const double conn = std::numbers::pi / 2.0 *
                                (specfun::bessel_i(-nu, z) - specfun::bessel_i(nu, z)) /
                                std::sin(nu * std::numbers::pi);
            CHECK(oracle::rel(specfun::bessel_k(Order(nu), z), conn) < 1e-9);
        }
    }
}

TEST_CASE("small-argument forms") {
    CHECK(specfun::bessel_k_smallz(Order(0.5), 1e-3) == doctest::Approx(39.63).epsilon(1e-3));
    CHECK(specfun::bessel_k_smallz(Order(0.0), 1e-3) ==
          doctest::Approx(-std::log(1e-3)).epsilon(1e-12));
    CHECK(specfun::bessel_k_smallz(Order(0.0), 1e-3) == doctest::Approx(6.9078).epsilon(1e-4));
    CHECK(specfun::bessel_k_smallz(Order(1.0), 1e-4) == doctest::Approx(1e4).epsilon(1e-9));
    // For 0 < nu < 1 the two-term form tracks K_nu to O(z^2).
    for (double nu : {0.2, 0.6}) {
        const double z = 1e-3;
        CHECK(oracle::rel(specfun::bessel_k_smallz(Order(nu), z), oracle::bessel_k(nu, z)) < 1e-5);
    }
    // K_0(z) / (-ln z) -> 1 as z decreases.
    double prev = 10.0;
    for (double z : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double ratio = specfun::bessel_k(Order(0.0), z) / -std::log(z);
        CHECK(std::abs(ratio - 1.0) < prev);
        prev = std::abs(ratio - 1.0);
    }
}

TEST_CASE("gamma ratio") {
    CHECK(specfun::gamma_ratio(Order(0.5)) == doctest::Approx(0.5).epsilon(1e-15));
    // Gamma(5/4) / Gamma(3/4)
    CHECK(specfun::gamma_ratio(Order(0.25)) == doctest::Approx(0.9064024771 / 1.2254167024).epsilon(1e-9));
    CHECK(std::abs(specfun::gamma_ratio(Order(1e-8)) - 1.0) < 1e-7);
    for (double nu : {0.05, 0.25, 0.4, 0.66, 0.9, 0.99}) {
        const double ref = oracle::lanczos_gamma(1.0 + nu) / oracle::lanczos_gamma(1.0 - nu);
        CHECK(oracle::rel(specfun::gamma_ratio(Order(nu)), ref) < 1e-12);
        CHECK(specfun::gamma_ratio(Order(nu)) > 0.0);
    }
    CHECK_THROWS_AS(specfun::gamma_ratio(Order(0.0)), DomainError);
    CHECK_THROWS_AS(specfun::gamma_ratio(Order(1.0)), DomainError);
}

TEST_CASE("reciprocal gamma series") {
    for (double x : {-0.9, -0.5, 0.0, 0.3, 1.0}) {
        CHECK(oracle::rel(specfun::rgamma1p(x), 1.0 / oracle::lanczos_gamma(1.0 + x)) < 1e-13);
    }
    CHECK_THROWS_AS(specfun::rgamma1p(1.5), DomainError);
}

} // TEST_SUITE
