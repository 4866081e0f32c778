#pragma once

// Renormalization-group trajectories lambda(R): the counterterm strength that
// keeps the zero-energy exterior solution fixed while the cutoff moves.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "invsq/model.hpp"

namespace invsq {

struct FlowPoint {
    Cutoff cutoff;
    double lambda;
    /// Square well only: interior branch n with sqrt(lambda) in (n pi, (n+1) pi).
    std::optional<int> branch_index;
};

/// r u0'/u0 of the zero-energy exterior solution evaluated at r = R+.
///
/// nu > 0: [(1/2 + nu) x^{2nu} - c (1/2 - nu)] / [x^{2nu} - c],  x = R/r0
/// nu = 0: 1/2 + c / (1 + c ln x)
double zero_energy_log_derivative(const Coupling& coupling, const Extension& ext,
                                  const Cutoff& cutoff);

/// zero_energy_log_derivative() - (1/2 - nu), evaluated without cancellation:
/// 2 nu x^{2nu} / (x^{2nu} - c), or c / (1 + c ln x) at nu = 0. Both flows
/// approach their fixed points at this rate.
double fixed_point_offset(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff);

/// R/r0 at which the flow has a pole, if one exists for these parameters.
std::optional<double> flow_pole_ratio(const Coupling& coupling, const Extension& ext);

/// Value that sqrt(lambda) cot sqrt(lambda) must take for the square well.
/// Throws FlowPoleError at the pole.
double flow_rhs_square_well(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff);

/// Smallest lambda > 0 solving sqrt(lambda) cot sqrt(lambda) = rhs.
FlowPoint flow_square_well(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff);

/// Closed-form delta-shell counterterm.
FlowPoint flow_delta_shell(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff);

FlowPoint flow(Scheme scheme, const Coupling& coupling, const Extension& ext, const Cutoff& cutoff);

/// x cot x, continued to 1 at x = 0.
double x_cot_x(double x);

/// Solves x cot x = target on the branch selected by target (< 1 -> (0, pi),
/// >= 1 -> (pi, 2 pi)); returns x.
double solve_x_cot_x(double target, int& branch_index);

/// Pole record reported in-band by flow_trajectory().
struct FlowPole {
    Cutoff cutoff;
    double critical_ratio;
    std::string message;
};

using FlowOutcome = std::variant<FlowPoint, FlowPole>;

/// Evaluates the flow on a strictly increasing grid; poles are returned in
/// place of the affected points. Throws UsageError for an empty or
/// non-monotone grid.
std::vector<FlowOutcome> flow_trajectory(Scheme scheme, const Coupling& coupling,
                                         const Extension& ext, std::span<const Cutoff> grid);

} // namespace invsq
