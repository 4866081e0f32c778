#pragma once

// Bound-state spectrum of the regulated inverse-square problem: the exact
// matching equations of both regulators, their low-energy forms, and the
// cutoff-independent closed-form momentum.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "invsq/flow.hpp"
#include "invsq/model.hpp"

namespace invsq {

enum class Method { ExactMatching, ClosedForm, OdeOracle };

std::string_view to_string(Method method);

struct BoundState {
    double k;
    double E;
    Method method;
    std::optional<Scheme> scheme; // empty for ClosedForm
    std::optional<Cutoff> cutoff; // empty for ClosedForm
    std::vector<std::string> warnings;

    static BoundState make(double k, Method method, std::optional<Scheme> scheme = std::nullopt,
                           std::optional<Cutoff> cutoff = std::nullopt);
};

struct NoBoundState {
    std::string reason;
};

using BindOutcome = std::variant<BoundState, NoBoundState>;

inline bool has_bound_state(const BindOutcome& o) { return std::holds_alternative<BoundState>(o); }

struct SpectralResidual {
    double k;
    double value;
};

/// KR cot(KR) - [1/2 + kR K_nu'(kR)/K_nu(kR)] with K = sqrt(k0^2 - k^2),
/// k0 = sqrt(lambda)/R. Requires 0 < k < k0. A pole of cot is reported as a
/// signed infinity.
SpectralResidual residual_square_well(const Coupling& coupling, double lambda, const Cutoff& cutoff,
                                      double k);

/// 1/2 + kR K_nu'(kR)/K_nu(kR) - kR coth(kR) + lambda, with the free interior
/// sinh(kr) inside the shell.
SpectralResidual residual_delta_shell(const Coupling& coupling, double lambda, const Cutoff& cutoff,
                                      double k);

SpectralResidual residual(Scheme scheme, const Coupling& coupling, double lambda,
                          const Cutoff& cutoff, double k);

struct ScanOptions {
    /// Defaults: 1e-8 / r0.
    std::optional<double> k_min;
    /// Defaults: 0.999 k0 (square well), 1e3 / R (delta shell).
    std::optional<double> k_max;
    int points = 400;
    /// Root refinement: relative bracket width ~ 2^(1 - bits).
    int bits = 48;
};

/// Below this index the generic nu > 0 path is ill-conditioned.
inline constexpr double kSmallOrderWarning = 1e-4;

/// All sign-change roots of the exact residual inside the scan window.
std::vector<double> scan_bound_state_roots(Scheme scheme, const Coupling& coupling,
                                           const Extension& ext, const Cutoff& cutoff,
                                           const ScanOptions& options = {});

/// Solves the exact matching equation at the flow's lambda(R). Throws
/// MultiplicityError when more than one root lies in the scan window.
BindOutcome solve_bound_state_exact(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                    const Cutoff& cutoff, const ScanOptions& options = {});

/// k = (2/r0) [Gamma(1+nu) / (c Gamma(1-nu))]^{1/(2nu)} for nu > 0 and
/// k = exp(1/c) / r0 at nu = 0; no bound state for c <= 0.
BindOutcome closed_form_k(const Coupling& coupling, const Extension& ext);

/// R -> 0 limit of the exact nu = 0 root, keeping the constant term of the
/// small-argument expansion K_0(z) = -ln(z/2) - gamma_E: k = (2/r0) exp(1/c - gamma_E).
/// Diagnostic companion to closed_form_k at the critical coupling.
BindOutcome critical_k_with_log_constant(const Extension& ext);

/// Low-energy (kR << 1) counterterm form. Square well: the value that
/// sqrt(lambda) cot sqrt(lambda) must take; delta shell: lambda itself.
double lowenergy_lambda(Scheme scheme, const Coupling& coupling, double k, const Cutoff& cutoff);

struct ConvergenceRow {
    Cutoff cutoff;
    std::optional<double> k_exact;
    std::optional<double> rel_deviation;
    std::string error; // non-empty when the exact solve failed for this row
};

struct ConvergenceTable {
    double k_closed;
    std::vector<ConvergenceRow> rows;
    /// Deviations decrease along the list (10% slack per step).
    bool monotone;
};

/// Exact roots along a strictly decreasing list of cutoffs compared with the
/// closed form. Requires c > 0 and max(R)/r0 < 0.1.
ConvergenceTable convergence_study(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                   const std::vector<Cutoff>& cutoffs);

/// True when each value is below 1.1 times its predecessor.
bool decreasing_with_slack(const std::vector<double>& values, double slack = 0.1);

} // namespace invsq
