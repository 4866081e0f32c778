#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "invsq/errors.hpp"
#include "invsq/flow.hpp"
#include "oracles.hpp"

using namespace invsq;

namespace {

const double kPi = std::numbers::pi;

Coupling nu_of(double nu) { return Coupling::from_nu(nu); }

// r u0'/u0 at R+ straight from the exterior solution, by a central difference
// of the log of u0 in ln r.
double exterior_log_derivative_fd(double nu, double c, double x) {
    auto u0 = [&](double t) {
        if (nu == 0.0) {
            return std::sqrt(t) * (1.0 + c * std::log(t));
        }
        return std::pow(t, 0.5 + nu) - c * std::pow(t, 0.5 - nu);
    };
    const double h = 1e-6;
    return (u0(x * std::exp(h)) - u0(x * std::exp(-h))) / (2.0 * h * u0(x));
}

} // namespace

TEST_SUITE("flow") {

TEST_CASE("square-well right-hand side examples") {
    CHECK(flow_rhs_square_well(nu_of(0.5), Extension(1.0, 1.0), Cutoff(0.1, 1.0)) ==
          doctest::Approx(-1.0 / 9.0).epsilon(1e-14));
    CHECK(std::abs(flow_rhs_square_well(nu_of(0.5), Extension(1.0, 1.0), Cutoff(1e-14, 1.0))) <
          1e-13);
    CHECK(flow_rhs_square_well(nu_of(0.0), Extension(1.0, 1.0), Cutoff(std::exp(-2.0), 1.0)) ==
          doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("log derivative at the cutoff matches the exterior solution") {
    for (double nu : {0.0, 0.2, 0.5, 0.8}) {
        for (double c : {-2.0, 0.5, 3.0}) {
            for (double x : {1e-3, 0.05, 0.3}) {
                const double ld =
                    zero_energy_log_derivative(nu_of(nu), Extension(c, 1.0), Cutoff(x, 1.0));
                INFO("nu=" << nu << " c=" << c << " x=" << x);
                CHECK(ld == doctest::Approx(exterior_log_derivative_fd(nu, c, x)).epsilon(1e-8));
                const double off = fixed_point_offset(nu_of(nu), Extension(c, 1.0), Cutoff(x, 1.0));
                CHECK(off + (0.5 - nu) == doctest::Approx(ld).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("square-well flow examples") {
    const FlowPoint p = flow_square_well(nu_of(0.5), Extension(1.0, 1.0), Cutoff(1e-12, 1.0));
    CHECK(p.lambda == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-11));
    CHECK(p.branch_index == 0);

    int branch = -1;
    const double s = solve_x_cot_x(1.0 - 1e-10, branch);
    CHECK(branch == 0);
    CHECK(s * s < 1e-9);

    // Just past the nu = 0 pole the right-hand side exceeds 1.
    const Cutoff past(std::exp(-1.0) * (1.0 + 1e-6), 1.0);
    const double rhs = flow_rhs_square_well(nu_of(0.0), Extension(1.0, 1.0), past);
    CHECK(rhs > 1.0);
    const FlowPoint q = flow_square_well(nu_of(0.0), Extension(1.0, 1.0), past);
    CHECK(q.branch_index == 1);
    CHECK(q.lambda > kPi * kPi);
    CHECK(q.lambda < 4.0 * kPi * kPi);
    // Independent bracketing of the same equation on (pi, 2 pi).
    const double root = oracle::bisect([&](double x) { return x * std::cos(x) / std::sin(x) - rhs; },
                                       kPi + 1e-12, 2.0 * kPi - 1e-12);
    CHECK(q.lambda == doctest::Approx(root * root).epsilon(1e-10));
}

TEST_CASE("square-well branch consistency") {
    for (int i = 0; i < 300; ++i) {
        const double nu = oracle::uniform(0.0, 1.0);
        const double c = oracle::uniform(-5.0, 5.0);
        const double x = oracle::log_uniform(1e-8, 0.5);
        FlowPoint p{Cutoff(x, 1.0), 0.0, std::nullopt};
        try {
            p = flow_square_well(nu_of(nu), Extension(c, 1.0), Cutoff(x, 1.0));
        } catch (const FlowPoleError&) {
            continue;
        }
        const double rhs = flow_rhs_square_well(nu_of(nu), Extension(c, 1.0), Cutoff(x, 1.0));
        const double s = std::sqrt(p.lambda);
        INFO("nu=" << nu << " c=" << c << " x=" << x << " rhs=" << rhs);
        CHECK(p.lambda > 0.0);
        // Absolute 1e-12 where the target is O(1); relative beyond that, since
        // x cot x is steep near its poles.
        CHECK(std::abs(x_cot_x(s) - rhs) < 1e-12 * std::max(1.0, rhs * rhs));
        for (int n = 1; n <= 2; ++n) {
            CHECK(std::abs(p.lambda - (n * kPi) * (n * kPi)) > 1e-9);
        }
        CHECK(p.branch_index == (rhs >= 1.0 ? 1 : 0));
    }
}

TEST_CASE("both schemes reproduce the same exterior log derivative") {
    for (double nu : {0.0, 0.3, 0.5, 0.9}) {
        for (double c : {-1.0, 0.4, 2.5}) {
            for (double x : {1e-6, 1e-3, 0.2}) {
                const Coupling cp = nu_of(nu);
                const Extension ext(c, 1.0);
                const Cutoff cut(x, 1.0);
                const double target = zero_energy_log_derivative(cp, ext, cut);
                const FlowPoint sw = flow_square_well(cp, ext, cut);
                const FlowPoint ds = flow_delta_shell(cp, ext, cut);
                INFO("nu=" << nu << " c=" << c << " x=" << x);
                // Square well: interior sin(k0 r) has r u'/u = sqrt(lambda) cot sqrt(lambda).
                CHECK(std::abs(x_cot_x(std::sqrt(sw.lambda)) - target) <
                      1e-10 * std::max(1.0, target * target));
                // Delta shell: interior r has r u'/u = 1; the shell subtracts lambda.
                CHECK(std::abs((1.0 + delta_shell_jump(ds.lambda)) - target) <
                      1e-10 * std::max(1.0, std::abs(target)));
            }
        }
    }
}

TEST_CASE("delta-shell flow examples") {
    CHECK(flow_delta_shell(nu_of(0.5), Extension(1.0, 1.0), Cutoff(0.1, 1.0)).lambda ==
          doctest::Approx(10.0 / 9.0).epsilon(1e-14));
    CHECK(flow_delta_shell(nu_of(0.5), Extension(1.0, 1.0), Cutoff(1e-14, 1.0)).lambda ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(flow_delta_shell(nu_of(0.0), Extension(2.0, 1.0), Cutoff(std::exp(-1.0), 1.0)).lambda ==
          doctest::Approx(2.5).epsilon(1e-14));
    const FlowPoint p = flow_delta_shell(nu_of(0.75), Extension(1.0, 1.0), Cutoff(0.01, 1.0));
    CHECK(p.lambda == doctest::Approx((-0.25 * 0.001 - 1.25) / (0.001 - 1.0)).epsilon(1e-13));
    CHECK(p.lambda == doctest::Approx(1.2515).epsilon(1e-4));
    CHECK_FALSE(p.branch_index.has_value());
}

TEST_CASE("negative delta-shell strength is returned unclamped") {
    const FlowPoint p = flow_delta_shell(nu_of(0.5), Extension(1.0, 1.0), Cutoff(2.0, 1.0));
    CHECK(p.lambda == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("delta-shell flow near the critical coupling") {
    // Near nu = 0 the extension constant has to follow nu for the solution to
    // stay fixed: with c = (c0 - nu)/(c0 + nu) the generic flow tends to the
    // logarithmic one.
    const double nu = 1e-6;
    for (double c0 : {0.5, 1.0, 2.0}) {
        for (double x : {1e-4, 1e-3, 0.01, 0.1, 0.5}) {
            const double c = (c0 - nu) / (c0 + nu);
            const double generic = flow_delta_shell(nu_of(nu), Extension(c, 1.0), Cutoff(x, 1.0)).lambda;
            const double log_form = flow_delta_shell(nu_of(0.0), Extension(c0, 1.0), Cutoff(x, 1.0)).lambda;
            INFO("c0=" << c0 << " x=" << x);
            CHECK(oracle::rel(generic, log_form) < 1e-4);
        }
    }
    // At fixed c != 1 the generic flow tends to 1/2 instead.
    const double fixed = flow_delta_shell(nu_of(1e-9), Extension(2.0, 1.0), Cutoff(1e-3, 1.0)).lambda;
    CHECK(fixed == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("flow poles") {
    const Coupling half = nu_of(0.5);
    const Extension ext(0.25, 1.0);
    REQUIRE(flow_pole_ratio(half, ext).has_value());
    CHECK(*flow_pole_ratio(half, ext) == doctest::Approx(0.25));
    CHECK(*flow_pole_ratio(nu_of(0.0), Extension(1.0, 1.0)) == doctest::Approx(std::exp(-1.0)));
    CHECK_FALSE(flow_pole_ratio(half, Extension(-1.0, 1.0)).has_value());
    try {
        (void)flow_delta_shell(half, ext, Cutoff(0.25, 1.0));
        FAIL("expected FlowPoleError");
    } catch (const FlowPoleError& e) {
        CHECK(e.critical_ratio() == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(flow_square_well(half, ext, Cutoff(0.25, 1.0)), FlowPoleError);
}

TEST_CASE("trajectories") {
    const std::vector<Cutoff> grid{Cutoff(0.1, 1.0), Cutoff(0.2, 1.0)};
    const auto ds = flow_trajectory(Scheme::DeltaShell, nu_of(0.5), Extension(1.0, 1.0), grid);
    REQUIRE(ds.size() == 2);
    CHECK(std::get<FlowPoint>(ds[0]).lambda == doctest::Approx(10.0 / 9.0));
    CHECK(std::get<FlowPoint>(ds[1]).lambda == doctest::Approx(10.0 / 8.0));

    const std::vector<Cutoff> with_pole{Cutoff(0.1, 1.0), Cutoff(0.25, 1.0), Cutoff(0.3, 1.0)};
    const auto sw = flow_trajectory(Scheme::SquareWell, nu_of(0.5), Extension(0.25, 1.0), with_pole);
    REQUIRE(sw.size() == 3);
    CHECK(std::holds_alternative<FlowPoint>(sw[0]));
    REQUIRE(std::holds_alternative<FlowPole>(sw[1]));
    CHECK(std::get<FlowPole>(sw[1]).critical_ratio == doctest::Approx(0.25));
    CHECK(std::holds_alternative<FlowPoint>(sw[2]));

    CHECK_THROWS_AS(flow_trajectory(Scheme::DeltaShell, nu_of(0.5), Extension(1.0, 1.0),
                                    std::vector<Cutoff>{}),
                    UsageError);
    const std::vector<Cutoff> backwards{Cutoff(0.2, 1.0), Cutoff(0.1, 1.0)};
    CHECK_THROWS_AS(flow_trajectory(Scheme::DeltaShell, nu_of(0.5), Extension(1.0, 1.0), backwards),
                    UsageError);
}

TEST_CASE("fixed points as the cutoff shrinks") {
    for (double c : {0.3, 1.0, 4.0}) {
        const double sw = flow_square_well(nu_of(0.5), Extension(c, 1.0), Cutoff(1e-10, 1.0)).lambda;
        CHECK(std::abs(sw - kPi * kPi / 4.0) < 1e-8);
    }
    for (double nu : {0.25, 0.5, 0.75}) {
        double prev = 1.0;
        for (double x : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const double ds = flow_delta_shell(nu_of(nu), Extension(1.0, 1.0), Cutoff(x, 1.0)).lambda;
            const double gap = std::abs(ds - (nu + 0.5));
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("x cot x") {
    CHECK(x_cot_x(0.0) == 1.0);
    CHECK(x_cot_x(kPi / 2.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(x_cot_x(1e-5) == doctest::Approx(1.0 - 1e-10 / 3.0).epsilon(1e-16));
    for (double x : {1e-4 * 0.999, 1e-4 * 1.001, 0.5, 2.0}) {
        CHECK(x_cot_x(x) == doctest::Approx(x / std::tan(x)).epsilon(1e-13));
    }
}

} // TEST_SUITE
