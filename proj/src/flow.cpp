#include "invsq/flow.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "invsq/errors.hpp"
#include "invsq/roots.hpp"

namespace invsq {

namespace {

constexpr double kPoleGuard = 1e-300;

// x^{2 nu} for x = R/r0.
double scaled_power(const Coupling& coupling, const Cutoff& cutoff) {
    return std::pow(cutoff.ratio(), 2.0 * coupling.nu());
}

[[noreturn]] void throw_pole(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    const double crit = flow_pole_ratio(coupling, ext).value_or(cutoff.ratio());
    throw FlowPoleError("flow pole at R/r0 = " + std::to_string(cutoff.ratio()) +
                            ": the zero-energy solution has a node at the cutoff (critical R/r0 = " +
                            std::to_string(crit) + ")",
                        crit);
}

// Shared denominators: x^{2nu} - c, or 1 + c ln x at nu = 0.
double flow_denominator(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    const double den = coupling.is_critical() ? 1.0 + ext.c() * std::log(cutoff.ratio())
                                              : scaled_power(coupling, cutoff) - ext.c();
    if (std::abs(den) < kPoleGuard) {
        throw_pole(coupling, ext, cutoff);
    }
    return den;
}

} // namespace

std::optional<double> flow_pole_ratio(const Coupling& coupling, const Extension& ext) {
    const double c = ext.c();
    if (coupling.is_critical()) {
        if (c == 0.0) {
            return std::nullopt;
        }
        return std::exp(-1.0 / c);
    }
    if (c <= 0.0) {
        return std::nullopt;
    }
    return std::pow(c, 1.0 / (2.0 * coupling.nu()));
}

double zero_energy_log_derivative(const Coupling& coupling, const Extension& ext,
                                  const Cutoff& cutoff) {
    const double den = flow_denominator(coupling, ext, cutoff);
    const double c = ext.c();
    if (coupling.is_critical()) {
        return 0.5 + c / den;
    }
    const double nu = coupling.nu();
    const double p = scaled_power(coupling, cutoff);
    return ((0.5 + nu) * p - c * (0.5 - nu)) / den;
}

double fixed_point_offset(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    const double den = flow_denominator(coupling, ext, cutoff);
    if (coupling.is_critical()) {
        return ext.c() / den;
    }
    return 2.0 * coupling.nu() * scaled_power(coupling, cutoff) / den;
}

double flow_rhs_square_well(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    return zero_energy_log_derivative(coupling, ext, cutoff);
}

double x_cot_x(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x * std::cos(x) / std::sin(x);
}

double solve_x_cot_x(double target, int& branch_index) {
    // x cot x decreases monotonically on every branch (n pi, (n+1) pi); the
    // first maps onto (-inf, 1), the second onto all reals.
    const double pi = std::numbers::pi;
    double lo = 0.0;
    double hi = pi;
    branch_index = 0;
    if (target >= 1.0) {
        lo = std::nextafter(pi, 4.0);
        hi = 2.0 * pi;
        branch_index = 1;
    }
    auto f = [target](double x) { return x_cot_x(x) - target; };
    const double flo = f(lo);
    const double fhi = f(hi);
    if (!(flo >= 0.0 && fhi <= 0.0)) {
        throw NumericalError("flow: x cot x = " + std::to_string(target) +
                                 " is not bracketed on branch " + std::to_string(branch_index),
                             "target too close to a pole of the flow");
    }
    return roots::refine(f, lo, hi, flo, fhi, 52, "flow_square_well");
}

FlowPoint flow_square_well(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    const double rhs = flow_rhs_square_well(coupling, ext, cutoff);
    int branch = 0;
    const double s = solve_x_cot_x(rhs, branch);
    return FlowPoint{cutoff, s * s, branch};
}

FlowPoint flow_delta_shell(const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    const double den = flow_denominator(coupling, ext, cutoff);
    const double c = ext.c();
    double lambda = 0.0;
    if (coupling.is_critical()) {
        lambda = 0.5 - c / den;
    } else {
        const double nu = coupling.nu();
        const double p = scaled_power(coupling, cutoff);
        lambda = ((0.5 - nu) * p - c * (0.5 + nu)) / den;
    }
    return FlowPoint{cutoff, lambda, std::nullopt};
}

FlowPoint flow(Scheme scheme, const Coupling& coupling, const Extension& ext, const Cutoff& cutoff) {
    switch (scheme) {
    case Scheme::SquareWell:
        return flow_square_well(coupling, ext, cutoff);
    case Scheme::DeltaShell:
        return flow_delta_shell(coupling, ext, cutoff);
    }
    throw UsageError("flow: unknown scheme");
}

std::vector<FlowOutcome> flow_trajectory(Scheme scheme, const Coupling& coupling,
                                         const Extension& ext, std::span<const Cutoff> grid) {
    if (grid.empty()) {
        throw UsageError("flow_trajectory: empty cutoff grid");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i].R() > grid[i - 1].R())) {
            throw UsageError("flow_trajectory: cutoff grid must be strictly increasing");
        }
    }
    std::vector<FlowOutcome> out;
    out.reserve(grid.size());
    for (const Cutoff& cutoff : grid) {
        try {
            out.emplace_back(flow(scheme, coupling, ext, cutoff));
        } catch (const FlowPoleError& e) {
            out.emplace_back(FlowPole{cutoff, e.critical_ratio(), e.what()});
        }
    }
    return out;
}

} // namespace invsq
