#pragma once

// Problem definition in natural units hbar = 2m = 1: the long-range strength
// g = 2 m alpha / hbar^2 equals alpha numerically and every bound state has
// energy E = -k^2.

#include <string>
#include <string_view>

#include "invsq/specfun.hpp"

namespace invsq {

/// Medium-weak coupling window for g.
inline constexpr double kCouplingMin = -0.25;
inline constexpr double kCouplingMax = 0.75;

/// Long-range strength g and its index nu = sqrt(g + 1/4).
class Coupling {
public:
    static Coupling from_g(double g);
    static Coupling from_nu(double nu);

    double g() const noexcept { return g_; }
    double nu() const noexcept { return nu_; }
    specfun::Order order() const { return specfun::Order(nu_); }
    /// The critical coupling g = -1/4 with its logarithmic solutions.
    bool is_critical() const noexcept { return nu_ == 0.0; }

private:
    Coupling(double g, double nu) : g_(g), nu_(nu) {}
    double g_;
    double nu_;
};

/// Coupling from g, throwing DomainError outside [-1/4, 3/4].
Coupling coupling_from_g(double g);

/// Self-adjoint-extension data: the zero-energy exterior solution is
/// (r/r0)^{1/2+nu} - c (r/r0)^{1/2-nu}, or (r/r0)^{1/2} [1 + c ln(r/r0)] at nu = 0.
class Extension {
public:
    Extension(double c, double r0);
    double c() const noexcept { return c_; }
    double r0() const noexcept { return r0_; }

private:
    double c_;
    double r0_;
};

enum class Scheme { SquareWell, DeltaShell };

std::string_view to_string(Scheme scheme);
/// Accepts "square-well" / "delta-shell" (and the underscore spellings).
Scheme parse_scheme(std::string_view text);

/// Short-distance cutoff radius together with its ratio to r0.
class Cutoff {
public:
    Cutoff(double R, double r0);
    double R() const noexcept { return R_; }
    double ratio() const noexcept { return ratio_; }

private:
    double R_;
    double ratio_;
};

/// Regulated potential V(r) for r > 0. The delta-shell term cannot be sampled
/// pointwise; for that scheme only the tail g/r^2 (r >= R) and the empty
/// interior are returned. See delta_shell_jump().
double potential_value(Scheme scheme, const Coupling& coupling, double lambda, const Cutoff& cutoff,
                       double r);

/// Interior (r < R) value of the regulated potential.
double interior_potential(Scheme scheme, double lambda, const Cutoff& cutoff);

/// Exterior tail g / r^2.
double exterior_potential(const Coupling& coupling, double r);

/// Jump of r u'/u across the shell at r = R: -lambda. The derivative itself
/// jumps by -(lambda / R) u(R).
double delta_shell_jump(double lambda);

inline double energy_from_k(double k) { return -(k * k); }
double k_from_energy(double E);

} // namespace invsq
