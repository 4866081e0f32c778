#include "invsq/wavefunction.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "invsq/errors.hpp"
#include "invsq/flow.hpp"
#include "invsq/specfun.hpp"

namespace invsq {

namespace {

constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 15;

// (1 - sin t / t) / 2 and (sinh t / t - 1) / 2, with series near t = 0.
double half_one_minus_sinc(double t) {
    if (std::abs(t) < 0.1) {
        const double t2 = t * t;
        return 0.5 * t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 * (1.0 / 5040.0 - t2 / 362880.0)));
    }
    return 0.5 * (1.0 - std::sin(t) / t);
}

double half_sinhc_minus_one(double t) {
    if (std::abs(t) < 0.1) {
        const double t2 = t * t;
        return 0.5 * t2 * (1.0 / 6.0 + t2 * (1.0 / 120.0 + t2 * (1.0 / 5040.0 + t2 / 362880.0)));
    }
    return 0.5 * (std::sinh(t) / t - 1.0);
}

// Interior shape: sin(qr) for q2 > 0, sinh(qr) for q2 < 0, r at q2 = 0.
double interior_shape(double q2, double r) {
    if (q2 > 0.0) {
        return std::sin(std::sqrt(q2) * r);
    }
    if (q2 < 0.0) {
        return std::sinh(std::sqrt(-q2) * r);
    }
    return r;
}

// Integral of interior_shape^2 over (0, R).
double interior_shape_norm(double q2, double R) {
    if (q2 > 0.0) {
        return R * half_one_minus_sinc(2.0 * std::sqrt(q2) * R);
    }
    if (q2 < 0.0) {
        return R * half_sinhc_minus_one(2.0 * std::sqrt(-q2) * R);
    }
    return R * R * R / 3.0;
}

// Integral of t K_nu(t)^2 over (a, inf).
double exterior_bessel_norm(specfun::Order nu, double a) {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    double lower = a;
    if (a < 1.0) {
        // t = e^s spreads the logarithmic / power-law behaviour near 0.
        auto g = [nu](double s) {
            const double t = std::exp(s);
            const double kv = specfun::bessel_k(nu, t);
            return t * t * kv * kv;
        };
        total += gauss_kronrod<double, 61>::integrate(g, std::log(a), 0.0, kQuadDepth, kQuadTol);
        lower = 1.0;
    }
    auto f = [nu](double t) {
        const double ks = specfun::bessel_k_scaled(nu, t);
        return t * ks * ks * std::exp(-2.0 * t);
    };
    total += gauss_kronrod<double, 61>::integrate(f, lower, std::numeric_limits<double>::infinity(),
                                                  kQuadDepth, kQuadTol);
    return total;
}

} // namespace

PiecewiseWave::PiecewiseWave(Scheme scheme, const Coupling& coupling, WaveKind kind, double c,
                             double r0, double R, double lambda, std::optional<double> k)
    : scheme_(scheme), coupling_(coupling), kind_(kind), c_(c), r0_(r0), R_(R), lambda_(lambda),
      k_(k) {
    u_R_ = exterior(R_);
}

PiecewiseWave PiecewiseWave::zero_energy(Scheme scheme, const Coupling& coupling,
                                         const Extension& ext, const Cutoff& cutoff) {
    const FlowPoint fp = flow(scheme, coupling, ext, cutoff);
    return PiecewiseWave(scheme, coupling, WaveKind::ZeroEnergy, ext.c(), ext.r0(), cutoff.R(),
                         fp.lambda, std::nullopt);
}

PiecewiseWave PiecewiseWave::bound_state(Scheme scheme, const Coupling& coupling,
                                         const Extension& ext, const Cutoff& cutoff, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("bound_state wave: k must be positive");
    }
    const FlowPoint fp = flow(scheme, coupling, ext, cutoff);
    return PiecewiseWave(scheme, coupling, WaveKind::BoundState, ext.c(), ext.r0(), cutoff.R(),
                         fp.lambda, k);
}

double PiecewiseWave::exterior(double r) const {
    if (kind_ == WaveKind::BoundState) {
        return std::sqrt(r) * specfun::bessel_k(coupling_.order(), *k_ * r);
    }
    const double x = r / r0_;
    const double nu = coupling_.nu();
    if (coupling_.is_critical()) {
        return std::sqrt(x) * (1.0 + c_ * std::log(x));
    }
    return std::pow(x, 0.5 + nu) - c_ * std::pow(x, 0.5 - nu);
}

double PiecewiseWave::interior(double r) const {
    // E - V inside: lambda/R^2 - k^2 for the well, -k^2 for the shell.
    double q2 = scheme_ == Scheme::SquareWell ? lambda_ / (R_ * R_) : 0.0;
    if (k_) {
        q2 -= *k_ * *k_;
    }
    const double at_R = interior_shape(q2, R_);
    if (at_R == 0.0) {
        throw NumericalError("wave: interior solution has a node at the cutoff");
    }
    if (r == R_) {
        return u_R_;
    }
    return u_R_ * interior_shape(q2, r) / at_R;
}

double eval_wave(const PiecewiseWave& w, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("eval_wave: r must be positive and finite");
    }
    const double u = r < w.R() ? w.interior(r) : w.exterior(r);
    return u * w.normalization().value_or(1.0);
}

NormParts norm_parts(const PiecewiseWave& w) {
    if (w.kind() != WaveKind::BoundState) {
        throw UsageError("normalize: zero-energy solutions are not normalizable");
    }
    const double R = w.R();
    const double k = *w.k();
    double q2 = w.scheme() == Scheme::SquareWell ? w.lambda() / (R * R) : 0.0;
    q2 -= k * k;
    const double u_R = w.exterior(R);
    const double at_R = interior_shape(q2, R);
    const double scale = u_R / at_R;
    const double inner = scale * scale * interior_shape_norm(q2, R);
    const double outer = exterior_bessel_norm(w.coupling().order(), k * R) / (k * k);
    return NormParts{inner, outer};
}

PiecewiseWave normalize(const PiecewiseWave& w) {
    const NormParts parts = norm_parts(w);
    PiecewiseWave out = w;
    out.norm_ = 1.0 / std::sqrt(parts.interior + parts.exterior);
    return out;
}

} // namespace invsq
