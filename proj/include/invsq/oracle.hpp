#pragma once

// Independent check of the spectrum: direct Numerov integration of
//   -u'' + V(r) u = E u
// with the regulated potential, shooting on E. No Bessel functions and no
// matching formulas are used.
//
// The integration variable is x = ln r with u = r^{1/2} y, which turns the
// radial equation into y'' = [1/4 + r^2 (V - E)] y. A fixed step in x resolves
// the cutoff scale and the e^{-kr} tail on one grid. The cutoff R is always a
// grid node; the discontinuity of the potential (square well) or of u'
// (delta shell) is imposed exactly there.

#include <cstddef>
#include <utility>
#include <vector>

#include "invsq/flow.hpp"
#include "invsq/model.hpp"
#include "invsq/spectrum.hpp"

namespace invsq {

inline constexpr int kDefaultSteps = 20000;
inline constexpr double kDefaultInnerRatio = 1e-3; // r_min / R
inline constexpr double kDefaultDecayLengths = 25.0; // k r_max

struct GridSpec {
    double r_min;
    double r_max;
    int n_steps;
};

/// r_min = 1e-3 R, r_max = max(25 / k, 4 R).
GridSpec default_grid(const Cutoff& cutoff, double k_estimate, int n_steps = kDefaultSteps);

struct RadialSolution {
    std::vector<double> r;
    std::vector<double> u;     // scaled to max |u| = 1
    std::vector<double> coeff; // y''/y in x = ln r on the side each node belongs to
    double E = 0.0;
    double step = 0.0;         // uniform spacing in ln r
    int node_count = 0;
    std::size_t cutoff_index = 0; // r[cutoff_index] == R
    std::size_t match_index = 0;  // outward and inward branches are joined here
    /// Casoratian of the outward and inward solutions at the match point,
    /// normalized; zero at an eigenvalue.
    double mismatch = 0.0;

    bool is_interior(std::size_t i) const noexcept { return i < cutoff_index; }
};

/// Integrates outward from r_min with the regular solution (sin Kr or sinh kr
/// inside the cutoff) and inward from r_max with the decaying tail, joined at
/// r ~ max(1/k, 2R).
RadialSolution integrate_radial(Scheme scheme, const Coupling& coupling, double lambda,
                                const Cutoff& cutoff, double E, const GridSpec& grid);

/// r u'/u at node i from the fourth-order Numerov derivative formula. Not
/// defined at the cutoff node or the grid ends.
double log_derivative_at(const RadialSolution& sol, std::size_t i);

struct ShootOptions {
    int n_steps = kDefaultSteps;
    double inner_ratio = kDefaultInnerRatio;
    double decay_lengths = kDefaultDecayLengths;
    int subdivisions = 64;
    double rel_tol = 1e-10;
};

/// Shoots for a bound state with E in [E_bracket.first, E_bracket.second]
/// using lambda(R) from the flow module.
BindOutcome shoot_bound_state(Scheme scheme, const Coupling& coupling, const Extension& ext,
                              const Cutoff& cutoff, std::pair<double, double> E_bracket,
                              const ShootOptions& options = {});

} // namespace invsq
