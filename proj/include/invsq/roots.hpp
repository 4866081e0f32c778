#pragma once

// Bracketed scalar root refinement shared by the flow and spectrum modules.

#include <cstdint>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "invsq/errors.hpp"

namespace invsq::roots {

inline constexpr std::uintmax_t kMaxIterations = 200;

/// Refines a sign-changing bracket [lo, hi] of `f` until its relative width is
/// about 2^(1 - bits). Returns the midpoint of the final bracket.
template <class F>
double refine(F&& f, double lo, double hi, double flo, double fhi, int bits, const char* what) {
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    std::uintmax_t iters = kMaxIterations;
    const boost::math::tools::eps_tolerance<double> tol(bits);
    std::pair<double, double> r;
    try {
        r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    } catch (const std::exception& e) {
        throw NumericalError(std::string(what) + ": root refinement failed", e.what());
    }
    if (iters >= kMaxIterations) {
        throw NumericalError(std::string(what) + ": root refinement did not converge",
                             "last bracket [" + std::to_string(r.first) + ", " +
                                 std::to_string(r.second) + "]");
    }
    return 0.5 * (r.first + r.second);
}

} // namespace invsq::roots
