#include "invsq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "invsq/errors.hpp"
#include "invsq/roots.hpp"
#include "invsq/specfun.hpp"

namespace invsq {

namespace {

using ld = long double;

ld x_cot_x_ld(ld x) {
    if (std::fabs(x) < 1e-5L) {
        const ld x2 = x * x;
        return 1.0L - x2 / 3.0L - x2 * x2 / 45.0L;
    }
    return x * std::cos(x) / std::sin(x);
}

// 1 - z coth z, accurate for small z.
ld one_minus_z_coth_z(ld z) {
    if (z < 0.1L) {
        const ld z2 = z * z;
        // z coth z = 1 + z^2/3 - z^4/45 + 2 z^6/945 - z^8/4725 + 2 z^10/93555
        return -z2 * (1.0L / 3.0L +
                      z2 * (-1.0L / 45.0L +
                            z2 * (2.0L / 945.0L + z2 * (-1.0L / 4725.0L + z2 * (2.0L / 93555.0L)))));
    }
    return 1.0L - z / std::tanh(z);
}

void require_k(double k, const char* fn) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError(std::string(fn) + ": k must be positive, got " + std::to_string(k));
    }
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::string format_roots(const std::vector<double>& roots) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        os << (i ? ", " : "") << roots[i];
    }
    return os.str();
}

} // namespace

std::string_view to_string(Method method) {
    switch (method) {
    case Method::ExactMatching:
        return "exact";
    case Method::ClosedForm:
        return "closed-form";
    case Method::OdeOracle:
        return "oracle";
    }
    return "unknown";
}

BoundState BoundState::make(double k, Method method, std::optional<Scheme> scheme,
                            std::optional<Cutoff> cutoff) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw RangeError("bound-state momentum must be positive and finite");
    }
    if (method == Method::ClosedForm && (scheme || cutoff)) {
        throw UsageError("closed-form bound states carry no scheme or cutoff");
    }
    return BoundState{k, energy_from_k(k), method, scheme, cutoff, {}};
}

namespace {

// Interior offsets are passed separately from lambda so the solver can feed in
// the analytic distance of the flow from its fixed point; rebuilding it from a
// rounded lambda loses all precision once (R/r0)^{2nu} approaches epsilon.
//
// Square well: KR cot KR - (1/2 - nu) = [f(KR) - f(sqrt(lambda))] + offset
// with f(x) = x cot x and offset = sqrt(lambda) cot sqrt(lambda) - (1/2 - nu).
double square_well_core(const Coupling& coupling, double lambda, ld offset, const Cutoff& cutoff,
                        double k) {
    require_k(k, "residual_square_well");
    if (!(lambda > 0.0)) {
        throw DomainError("residual_square_well: lambda must be positive");
    }
    const double z = k * cutoff.R();
    if (!(z * z < lambda)) {
        throw DomainError("residual_square_well: k must stay below k0 = sqrt(lambda)/R");
    }
    const ld s0 = std::sqrt(static_cast<ld>(lambda));
    const ld s = std::sqrt(static_cast<ld>(lambda) - static_cast<ld>(z) * z);
    if (std::sin(s) == 0.0L) {
        return std::copysign(std::numeric_limits<double>::infinity(), static_cast<double>(s));
    }
    const ld interior = (x_cot_x_ld(s) - x_cot_x_ld(s0)) + offset;
    const ld excess = specfun::bessel_k_logderiv_excess(coupling.order(), z);
    return static_cast<double>(interior - excess);
}

// Delta shell: offset = lambda - 1/2 - nu.
double delta_shell_core(const Coupling& coupling, ld offset, const Cutoff& cutoff, double k) {
    require_k(k, "residual_delta_shell");
    const double z = k * cutoff.R();
    const ld excess = specfun::bessel_k_logderiv_excess(coupling.order(), z);
    return static_cast<double>(excess + one_minus_z_coth_z(z) + offset);
}

} // namespace

SpectralResidual residual_square_well(const Coupling& coupling, double lambda, const Cutoff& cutoff,
                                      double k) {
    const ld offset =
        lambda > 0.0 ? x_cot_x_ld(std::sqrt(static_cast<ld>(lambda))) - (0.5L - coupling.nu()) : 0.0L;
    return {k, square_well_core(coupling, lambda, offset, cutoff, k)};
}

SpectralResidual residual_delta_shell(const Coupling& coupling, double lambda, const Cutoff& cutoff,
                                      double k) {
    const ld offset = static_cast<ld>(lambda) - 0.5L - coupling.nu();
    return {k, delta_shell_core(coupling, offset, cutoff, k)};
}

SpectralResidual residual(Scheme scheme, const Coupling& coupling, double lambda,
                          const Cutoff& cutoff, double k) {
    switch (scheme) {
    case Scheme::SquareWell:
        return residual_square_well(coupling, lambda, cutoff, k);
    case Scheme::DeltaShell:
        return residual_delta_shell(coupling, lambda, cutoff, k);
    }
    throw UsageError("residual: unknown scheme");
}

std::vector<double> scan_bound_state_roots(Scheme scheme, const Coupling& coupling,
                                           const Extension& ext, const Cutoff& cutoff,
                                           const ScanOptions& options) {
    if (options.points < 2) {
        throw UsageError("scan: at least two grid points are required");
    }
    const FlowPoint fp = flow(scheme, coupling, ext, cutoff);
    const double lambda = fp.lambda;
    const double R = cutoff.R();

    double k_hi = 1e3 / R;
    if (scheme == Scheme::SquareWell) {
        k_hi = 0.999 * std::sqrt(lambda) / R;
    }
    k_hi = options.k_max.value_or(k_hi);
    if (scheme == Scheme::SquareWell) {
        k_hi = std::min(k_hi, std::nextafter(std::sqrt(lambda) / R, 0.0));
    }
    const double k_lo = options.k_min.value_or(1e-8 / ext.r0());
    if (!(k_lo > 0.0)) {
        throw UsageError("scan: k_min must be positive");
    }
    if (!(k_hi > k_lo)) {
        return {};
    }

    std::vector<double> grid = log_grid(k_lo, k_hi, options.points);

    // Square-well branches above the principal one put poles of cot(KR) in the
    // window; scan each pole-free segment separately.
    std::vector<double> poles;
    if (scheme == Scheme::SquareWell) {
        const double s0 = std::sqrt(lambda);
        for (int n = 1; n * std::numbers::pi < s0; ++n) {
            const double t = n * std::numbers::pi;
            const double kp = std::sqrt((s0 - t) * (s0 + t)) / R;
            if (kp > k_lo && kp < k_hi) {
                poles.push_back(kp);
                grid.push_back(kp * (1.0 - 1e-9));
                grid.push_back(kp * (1.0 + 1e-9));
            }
        }
        std::sort(grid.begin(), grid.end());
    }
    auto segment_of = [&poles](double k) {
        return std::count_if(poles.begin(), poles.end(), [k](double p) { return p < k; });
    };

    const ld offset = fixed_point_offset(coupling, ext, cutoff);
    auto f = [&](double k) {
        return scheme == Scheme::SquareWell
                   ? square_well_core(coupling, lambda, offset, cutoff, k)
                   : delta_shell_core(coupling, -offset, cutoff, k);
    };

    std::vector<double> roots;
    double k_prev = grid.front();
    double f_prev = f(k_prev);
    if (f_prev == 0.0) {
        roots.push_back(k_prev);
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double k = grid[i];
        const double fk = f(k);
        if (fk == 0.0) {
            roots.push_back(k);
        } else if (f_prev != 0.0 && std::signbit(fk) != std::signbit(f_prev) &&
                   segment_of(k) == segment_of(k_prev) && std::isfinite(fk) &&
                   std::isfinite(f_prev)) {
            roots.push_back(roots::refine(f, k_prev, k, f_prev, fk, options.bits, "spectrum scan"));
        }
        k_prev = k;
        f_prev = fk;
    }
    return roots;
}

BindOutcome solve_bound_state_exact(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                    const Cutoff& cutoff, const ScanOptions& options) {
    const std::vector<double> roots = scan_bound_state_roots(scheme, coupling, ext, cutoff, options);
    if (roots.empty()) {
        return NoBoundState{"no sign change of the matching residual in the scan window"};
    }
    if (roots.size() > 1) {
        throw MultiplicityError("exact matching found " + std::to_string(roots.size()) +
                                    " bound-state roots: " + format_roots(roots),
                                roots);
    }
    BoundState bs = BoundState::make(roots.front(), Method::ExactMatching, scheme, cutoff);
    if (!coupling.is_critical() && coupling.nu() < kSmallOrderWarning) {
        bs.warnings.emplace_back("nu < 1e-4: generic path is ill-conditioned near the critical coupling");
    }
    if (roots.front() * cutoff.R() > 0.1) {
        bs.warnings.emplace_back("kR > 0.1: deep state outside the low-energy window");
    }
    return bs;
}

BindOutcome closed_form_k(const Coupling& coupling, const Extension& ext) {
    if (!coupling.is_critical() && coupling.nu() >= 1.0 - specfun::kUpperOrderGuard) {
        throw DomainError("closed_form_k: nu = 1 (g = 3/4) is reachable only through the exact "
                          "spectral equations");
    }
    if (ext.c() <= 0.0) {
        return NoBoundState{"c <= 0 selects the extension without a shallow bound state"};
    }
    double k = 0.0;
    if (coupling.is_critical()) {
        k = std::exp(1.0 / ext.c()) / ext.r0();
    } else {
        const double ratio = specfun::gamma_ratio(coupling.order());
        k = 2.0 / ext.r0() * std::pow(ratio / ext.c(), 1.0 / (2.0 * coupling.nu()));
    }
    if (!std::isfinite(k) || k <= 0.0) {
        throw RangeError("closed_form_k: momentum not representable for these parameters");
    }
    BoundState bs = BoundState::make(k, Method::ClosedForm);
    if (!coupling.is_critical() && coupling.nu() < kSmallOrderWarning) {
        bs.warnings.emplace_back("nu < 1e-4: closed form is ill-conditioned near the critical coupling");
    }
    return bs;
}

BindOutcome critical_k_with_log_constant(const Extension& ext) {
    if (ext.c() <= 0.0) {
        return NoBoundState{"c <= 0 selects the extension without a shallow bound state"};
    }
    const double k = 2.0 / ext.r0() * std::exp(1.0 / ext.c() - std::numbers::egamma);
    if (!std::isfinite(k)) {
        throw RangeError("critical_k_with_log_constant: momentum overflows");
    }
    return BoundState::make(k, Method::ClosedForm);
}

double lowenergy_lambda(Scheme scheme, const Coupling& coupling, double k, const Cutoff& cutoff) {
    require_k(k, "lowenergy_lambda");
    const double z = k * cutoff.R();
    if (coupling.is_critical()) {
        const double lz = std::log(z);
        if (lz == 0.0) {
            throw DomainError("lowenergy_lambda: kR = 1 is outside the low-energy window");
        }
        return scheme == Scheme::SquareWell ? 0.5 + 1.0 / lz : 0.5 - 1.0 / lz;
    }
    const double nu = coupling.nu();
    const double t = std::pow(0.5 * z, 2.0 * nu) / specfun::gamma_ratio(coupling.order());
    if (scheme == Scheme::SquareWell) {
        return 0.5 + nu * (t + 1.0) / (t - 1.0);
    }
    return (nu + 0.5 + (nu - 0.5) * t) / (1.0 - t);
}

bool decreasing_with_slack(const std::vector<double>& values, double slack) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[i - 1] * (1.0 + slack)) {
            return false;
        }
    }
    return true;
}

ConvergenceTable convergence_study(Scheme scheme, const Coupling& coupling, const Extension& ext,
                                   const std::vector<Cutoff>& cutoffs) {
    if (!(ext.c() > 0.0)) {
        throw UsageError("convergence_study: requires c > 0");
    }
    if (cutoffs.empty()) {
        throw UsageError("convergence_study: empty cutoff list");
    }
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i].R() < cutoffs[i - 1].R())) {
            throw UsageError("convergence_study: cutoffs must be strictly decreasing");
        }
    }
    if (!(cutoffs.front().ratio() < 0.1)) {
        throw UsageError("convergence_study: requires max(R)/r0 < 0.1");
    }
    const BindOutcome closed = closed_form_k(coupling, ext);
    const double k_closed = std::get<BoundState>(closed).k;

    ConvergenceTable table{k_closed, {}, true};
    std::vector<double> devs;
    for (const Cutoff& cutoff : cutoffs) {
        ConvergenceRow row{cutoff, std::nullopt, std::nullopt, {}};
        try {
            const BindOutcome exact = solve_bound_state_exact(scheme, coupling, ext, cutoff);
            if (const auto* bs = std::get_if<BoundState>(&exact)) {
                row.k_exact = bs->k;
                row.rel_deviation = std::abs(bs->k - k_closed) / k_closed;
                devs.push_back(*row.rel_deviation);
            } else {
                row.error = std::get<NoBoundState>(exact).reason;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    table.monotone = decreasing_with_slack(devs);
    return table;
}

} // namespace invsq
