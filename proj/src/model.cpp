#include "invsq/model.hpp"

#include <cmath>
#include <string>

#include "invsq/errors.hpp"

namespace invsq {

Coupling Coupling::from_g(double g) {
    if (!(g >= kCouplingMin && g <= kCouplingMax)) {
        throw DomainError("coupling g = " + std::to_string(g) +
                          " lies outside the medium-weak window [-0.25, 0.75]; "
                          "the strong-coupling regime g < -1/4 is out of scope");
    }
    return Coupling(g, std::sqrt(g + 0.25));
}

Coupling Coupling::from_nu(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw DomainError("index nu = " + std::to_string(nu) +
                          " lies outside [0, 1] (coupling window [-0.25, 0.75])");
    }
    return Coupling(nu * nu - 0.25, nu);
}

Coupling coupling_from_g(double g) { return Coupling::from_g(g); }

Extension::Extension(double c, double r0) : c_(c), r0_(r0) {
    if (!std::isfinite(c)) {
        throw DomainError("extension parameter c must be finite");
    }
    if (!(r0 > 0.0) || !std::isfinite(r0)) {
        throw DomainError("extension scale r0 must be positive, got " + std::to_string(r0));
    }
}

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::SquareWell:
        return "square-well";
    case Scheme::DeltaShell:
        return "delta-shell";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "square-well" || text == "square_well" || text == "sw") {
        return Scheme::SquareWell;
    }
    if (text == "delta-shell" || text == "delta_shell" || text == "ds") {
        return Scheme::DeltaShell;
    }
    throw UsageError("unknown scheme '" + std::string(text) +
                     "' (expected square-well or delta-shell)");
}

Cutoff::Cutoff(double R, double r0) : R_(R), ratio_(R / r0) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw DomainError("cutoff R must be positive, got " + std::to_string(R));
    }
    if (!(r0 > 0.0) || !std::isfinite(r0)) {
        throw DomainError("scale r0 must be positive, got " + std::to_string(r0));
    }
}

double interior_potential(Scheme scheme, double lambda, const Cutoff& cutoff) {
    switch (scheme) {
    case Scheme::SquareWell:
        return -lambda / (cutoff.R() * cutoff.R());
    case Scheme::DeltaShell:
        return 0.0;
    }
    return 0.0;
}

double exterior_potential(const Coupling& coupling, double r) { return coupling.g() / (r * r); }

double potential_value(Scheme scheme, const Coupling& coupling, double lambda, const Cutoff& cutoff,
                       double r) {
    if (!(r > 0.0)) {
        throw DomainError("potential_value: r must be positive, got " + std::to_string(r));
    }
    return r < cutoff.R() ? interior_potential(scheme, lambda, cutoff)
                          : exterior_potential(coupling, r);
}

double delta_shell_jump(double lambda) { return -lambda; }

double k_from_energy(double E) {
    if (!(E < 0.0)) {
        throw DomainError("bound-state energy must be negative");
    }
    return std::sqrt(-E);
}

} // namespace invsq
