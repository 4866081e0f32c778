#pragma once

// Analytic piecewise wavefunctions of the regulated problem. The exterior
// coefficient is fixed to 1: the zero-energy exterior is
// (r/r0)^{1/2+nu} - c (r/r0)^{1/2-nu} (or (r/r0)^{1/2} [1 + c ln(r/r0)]) and the
// bound-state exterior is r^{1/2} K_nu(kr). The interior is scaled to be
// continuous at R.

#include <optional>

#include "invsq/model.hpp"

namespace invsq {

enum class WaveKind { ZeroEnergy, BoundState };

class PiecewiseWave {
public:
    /// lambda is taken from the flow at R.
    static PiecewiseWave zero_energy(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                     const Cutoff& cutoff);
    static PiecewiseWave bound_state(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                     const Cutoff& cutoff, double k);

    Scheme scheme() const noexcept { return scheme_; }
    const Coupling& coupling() const noexcept { return coupling_; }
    WaveKind kind() const noexcept { return kind_; }
    double c() const noexcept { return c_; }
    double r0() const noexcept { return r0_; }
    double R() const noexcept { return R_; }
    double lambda() const noexcept { return lambda_; }
    std::optional<double> k() const noexcept { return k_; }
    /// Overall factor applied on top of the unit exterior coefficient; empty
    /// until normalize() has been called.
    std::optional<double> normalization() const noexcept { return norm_; }

    /// Unscaled exterior branch.
    double exterior(double r) const;
    /// Unscaled interior branch; equals exterior(R) at r = R.
    double interior(double r) const;

private:
    PiecewiseWave(Scheme scheme, const Coupling& coupling, WaveKind kind, double c, double r0,
                  double R, double lambda, std::optional<double> k);

    Scheme scheme_;
    Coupling coupling_;
    WaveKind kind_;
    double c_;
    double r0_;
    double R_;
    double lambda_;
    std::optional<double> k_;
    std::optional<double> norm_;
    double u_R_ = 0.0; // exterior(R)

    friend PiecewiseWave normalize(const PiecewiseWave& w);
};

/// u(r), including the normalization factor when present.
double eval_wave(const PiecewiseWave& w, double r);

struct NormParts {
    double interior; // integral of u^2 over (0, R)
    double exterior; // integral of u^2 over (R, inf)
};

/// Integrals of the unscaled bound-state wave; UsageError for ZeroEnergy.
NormParts norm_parts(const PiecewiseWave& w);

/// Wave with integral of u^2 equal to 1. UsageError for ZeroEnergy.
PiecewiseWave normalize(const PiecewiseWave& w);

} // namespace invsq
