#include "invsq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invsq/errors.hpp"

namespace invsq {

namespace {

using ld = long double;

constexpr ld kRescaleAbove = 1e200L;
constexpr int kTaylorOrder = 10;
constexpr std::size_t kInteriorRefine = 16;

// Uniform grid in ln r with R at node n_in.
struct LogGrid {
    double R;
    double h;
    std::size_t n_in;
    std::size_t n_total; // index of the last node

    double radius(std::size_t i) const {
        return R * std::exp((static_cast<double>(i) - static_cast<double>(n_in)) * h);
    }
};

LogGrid make_grid(double R, double r_min, double h, double r_max) {
    LogGrid g{};
    g.R = R;
    const double inner = std::log(R / r_min);
    g.n_in = std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(inner / h)));
    g.h = inner / static_cast<double>(g.n_in);
    const auto n_out =
        std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(std::log(r_max / R) / g.h)));
    g.n_total = g.n_in + n_out;
    return g;
}

double step_from_spec(double R, const GridSpec& grid) {
    if (!(grid.r_min > 0.0 && grid.r_min < R && grid.r_max > R)) {
        throw UsageError("grid: need 0 < r_min < R < r_max");
    }
    if (grid.n_steps < 16) {
        throw UsageError("grid: n_steps must be at least 16");
    }
    return std::log(grid.r_max / grid.r_min) / grid.n_steps;
}

struct Problem {
    Scheme scheme;
    double nu;
    double g;
    long double lambda;
    double R;
    double E;
    long double v_in;
};

// y(x_R + h) - y(x_R) for y'' = (A + B R^2 e^{2t}) y from y(x_R) and y'(x_R).
ld taylor_increment(ld A, ld BR2, ld y0, ld y1, ld h) {
    ld d[kTaylorOrder + 1] = {};
    ld fder[kTaylorOrder + 1] = {};
    d[0] = y0;
    d[1] = y1;
    ld two_j = 1.0L;
    for (int j = 0; j <= kTaylorOrder; ++j) {
        fder[j] = two_j * BR2 + (j == 0 ? A : 0.0L);
        two_j *= 2.0L;
    }
    for (int n = 0; n + 2 <= kTaylorOrder; ++n) {
        ld s = 0.0L;
        ld binom = 1.0L;
        for (int j = 0; j <= n; ++j) {
            s += binom * fder[j] * d[n - j];
            binom = binom * (n - j) / (j + 1);
        }
        d[n + 2] = s;
    }
    ld sum = 0.0L;
    ld term = h;
    for (int n = 1; n <= kTaylorOrder; ++n) {
        sum += d[n] * term;
        term *= h / (n + 1);
    }
    return sum;
}

// R exp((i - origin) step) for i = 0..count-1, from two exponential tables.
std::vector<ld> log_radii(ld R, ld step, std::size_t count, std::size_t origin) {
    constexpr std::size_t block = 256;
    const auto lo = -static_cast<long long>(origin);
    std::vector<ld> fine(block);
    for (std::size_t j = 0; j < block; ++j) {
        fine[j] = std::exp(static_cast<ld>(j) * step);
    }
    std::vector<ld> r(count);
    for (std::size_t b0 = 0; b0 < count; b0 += block) {
        const ld base = R * std::exp(static_cast<ld>(lo + static_cast<long long>(b0)) * step);
        for (std::size_t j = 0; j < block && b0 + j < count; ++j) {
            r[b0 + j] = base * fine[j];
        }
    }
    r[origin] = R;
    return r;
}

// Numerov in summed form. With Y = (1 - h^2 f / 12) y the scheme reads
// Y_{n+1} - 2 Y_n + Y_{n-1} = h^2 f_n y_n; the first difference D is carried
// separately so that rounding does not accumulate as eps / h.
struct Numerov {
    ld h2;
    ld Y;
    ld D; // Y_{n+1} - Y_n after step()

    static ld weight(ld h2, ld f) { return 1.0L - h2 * f / 12.0L; }

    // Advances from node n (coefficient f_n, value y_n) and returns Y_{n+1}.
    ld step(ld f_n, ld y_n) {
        D += h2 * f_n * y_n;
        Y += D;
        return Y;
    }
    void scale(ld factor) {
        Y *= factor;
        D *= factor;
    }
};

struct Shot {
    std::vector<double> r;
    std::vector<double> y;
    std::vector<double> f;
    std::size_t match = 0;
    double mismatch = 0.0;
};

Shot run(const Problem& p, const LogGrid& grid) {
    const std::size_t N = grid.n_total;
    const std::size_t n_in = grid.n_in;
    const ld h = grid.h;
    const ld h2 = h * h;
    const ld R = p.R;
    const ld E = p.E;
    const ld k = std::sqrt(-E);
    const ld v_in = p.v_in;
    const ld A = 0.25L + static_cast<ld>(p.g);

    const std::vector<ld> r = log_radii(R, h, N + 1, n_in);
    std::vector<ld> f(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        f[i] = i < n_in ? 0.25L + r[i] * r[i] * (v_in - E) : A - E * r[i] * r[i];
    }

    const ld r_turn = std::max(1.0L / k, 2.0L * R);
    auto m = static_cast<std::size_t>(std::llround(std::log(r_turn / R) / h));
    m = n_in + std::clamp<std::size_t>(m, 2, N - n_in - 3);

    // Interior on a finer step, continued one ghost node past R with the
    // interior coefficient. Regular start u = sin(qr), sinh(qr) or r.
    const ld hi = h / kInteriorRefine;
    const ld hi2 = hi * hi;
    const std::size_t n_fine = n_in * kInteriorRefine;
    const std::vector<ld> rf = log_radii(R, hi, n_fine + 2, n_fine);
    auto f_fine = [&](std::size_t j) { return 0.25L + rf[j] * rf[j] * (v_in - E); };
    const ld q2 = E - v_in;
    auto start = [&](std::size_t j) {
        ld u = rf[j];
        if (q2 > 0.0L) {
            u = std::sin(std::sqrt(q2) * rf[j]);
        } else if (q2 < 0.0L) {
            u = std::sinh(std::sqrt(-q2) * rf[j]);
        }
        return u / std::sqrt(rf[j]);
    };

    std::vector<ld> out(m + 2, 0.0L);
    out[0] = start(0);
    ld y_cur = start(1);
    Numerov inner{hi2, Numerov::weight(hi2, f_fine(1)) * y_cur, 0.0L};
    inner.D = inner.Y - Numerov::weight(hi2, f_fine(0)) * out[0];
    ld y_prev = out[0];
    ld y_back = 0.0L; // y at the fine node before R
    ld D_back = 0.0L; // Y_R - Y_before
    for (std::size_t j = 1; j <= n_fine; ++j) {
        if (j % kInteriorRefine == 0) {
            out[j / kInteriorRefine] = y_cur;
        }
        if (j == n_fine) {
            y_back = y_prev;
            D_back = inner.D;
        }
        inner.step(f_fine(j), y_cur);
        y_prev = y_cur;
        y_cur = inner.Y / Numerov::weight(hi2, f_fine(j + 1));
        if (std::abs(y_cur) > kRescaleAbove) {
            const ld s = 1.0L / kRescaleAbove;
            inner.scale(s);
            y_cur *= s;
            y_prev *= s;
            y_back *= s;
            D_back *= s;
            for (std::size_t i = 0; i <= j / kInteriorRefine; ++i) {
                out[i] *= s;
            }
        }
    }
    // y_cur is the ghost value past R; inner.D = Y_ghost - Y_R and D_back =
    // Y_R - Y_before. Derivative: [(Y - T y)_{+} - (Y - T y)_{-}] / 2h.
    const ld y_R = out[n_in];
    const ld T_plus = hi2 * f_fine(n_fine + 1) / 12.0L;
    const ld T_minus = hi2 * f_fine(n_fine - 1) / 12.0L;
    ld dy = ((inner.D + D_back) - (T_plus * y_cur - T_minus * y_back)) / (2.0L * hi);
    if (p.scheme == Scheme::DeltaShell) {
        dy -= p.lambda * y_R;
    }

    // Exterior outward from R to the match point.
    // The recurrence is started on its own modes: for the locally constant
    // coefficient f0 the discrete solution is y_R cosh(n theta) + (dy/mu)
    // sinh(n theta) rather than the continuous mu n h. Without this the
    // growing mode is seeded at O(h^4) of the decaying one.
    const ld f0 = f[n_in];
    const ld wf0 = Numerov::weight(h2, f0);
    const ld C = (1.0L + 5.0L * h2 * f0 / 12.0L) / wf0;
    const ld S_over_mu = h * std::sqrt((C + 1.0L) / (2.0L * wf0));
    const ld mu_h = std::sqrt(std::abs(f0)) * h;
    ld cont_c = std::cosh(mu_h);
    ld cont_s = std::sinh(mu_h) / std::sqrt(std::abs(f0));
    if (f0 <= 0.0L) {
        cont_c = std::cos(mu_h);
        cont_s = mu_h == 0.0L ? h : std::sin(mu_h) / std::sqrt(std::abs(f0));
    }
    const ld delta = taylor_increment(A, -E * R * R, y_R, dy, h) + (C - cont_c) * y_R +
                     (S_over_mu - cont_s) * dy;
    const ld w0 = Numerov::weight(h2, f[n_in]);
    const ld w1 = Numerov::weight(h2, f[n_in + 1]);
    out[n_in + 1] = y_R + delta;
    Numerov outer{h2, w1 * out[n_in + 1], w1 * delta + (w1 - w0) * y_R};
    for (std::size_t i = n_in + 1; i <= m; ++i) {
        outer.step(f[i], out[i]);
        out[i + 1] = outer.Y / Numerov::weight(h2, f[i + 1]);
        if (std::abs(out[i + 1]) > kRescaleAbove) {
            const ld s = 1.0L / kRescaleAbove;
            outer.scale(s);
            for (std::size_t j = 0; j <= i + 1; ++j) {
                out[j] *= s;
            }
        }
    }
    // outer.D = Y_{m+1} - Y_m.

    // Inward from r_max with the decaying tail.
    std::vector<ld> in(N + 1, 0.0L);
    in[N] = 1.0L;
    in[N - 1] = std::exp(k * (r[N] - r[N - 1])) * std::sqrt(r[N] / r[N - 1]);
    const ld wN = Numerov::weight(h2, f[N]);
    const ld wN1 = Numerov::weight(h2, f[N - 1]);
    Numerov back{h2, wN1 * in[N - 1], wN1 * in[N - 1] - wN * in[N]};
    ld D_in_m = 0.0L; // Y_m - Y_{m+1}
    for (std::size_t i = N - 1; i > m; --i) {
        back.step(f[i], in[i]);
        in[i - 1] = back.Y / Numerov::weight(h2, f[i - 1]);
        D_in_m = back.D;
        if (std::abs(in[i - 1]) > kRescaleAbove) {
            const ld s = 1.0L / kRescaleAbove;
            back.scale(s);
            D_in_m *= s;
            for (std::size_t j = i - 1; j <= N; ++j) {
                in[j] *= s;
            }
        }
    }

    ld peak = 0.0L;
    for (std::size_t i = 0; i <= m + 1; ++i) {
        peak = std::max(peak, std::abs(out[i] * std::sqrt(r[i])));
    }
    if (!(peak > 0.0L) || !std::isfinite(peak)) {
        throw NumericalError("integrate_radial: outward solution overflowed or vanished");
    }
    const ld in_scale = in[m];
    // Casoratian Y^out_m Y^in_{m+1} - Y^out_{m+1} Y^in_m written with the
    // differences, which are known to full precision.
    const ld wm = Numerov::weight(h2, f[m]);
    const ld Yo = wm * out[m] / peak;
    const ld Do = outer.D / peak;
    const ld Yi = wm * in[m] / in_scale;
    const ld Di = -D_in_m / in_scale;
    const ld cas = Yo * Di - Do * Yi;

    Shot s;
    s.match = m;
    s.mismatch = static_cast<double>(cas);
    if (!std::isfinite(s.mismatch)) {
        throw NumericalError("integrate_radial: non-finite matching data");
    }
    s.r.resize(N + 1);
    s.f.resize(N + 1);
    s.y.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        s.r[i] = static_cast<double>(r[i]);
        s.f[i] = static_cast<double>(f[i]);
        const ld v = i <= m ? out[i] / peak : in[i] / in_scale * (out[m] / peak);
        s.y[i] = static_cast<double>(v);
    }
    return s;
}

Problem make_problem(Scheme scheme, const Coupling& coupling, ld lambda, const Cutoff& cutoff,
                     double E) {
    if (!(E < 0.0)) {
        throw DomainError("integrate_radial: E must be negative");
    }
    const ld R = cutoff.R();
    const ld v_in = scheme == Scheme::SquareWell ? -lambda / (R * R) : 0.0L;
    return Problem{scheme, coupling.nu(), coupling.g(), lambda, cutoff.R(), E, v_in};
}

// lambda(R) carried past double precision. Near nu = 1 the bound state sits in
// lambda - (1/2 + nu), which can be far below one ulp of lambda, so lambda is
// rebuilt from the fixed-point offset.
ld precise_lambda(Scheme scheme, const Coupling& coupling, const Extension& ext, const Cutoff& cutoff,
                  double lambda) {
    const ld offset = fixed_point_offset(coupling, ext, cutoff);
    const ld nu = coupling.nu();
    if (scheme == Scheme::DeltaShell) {
        return 0.5L + nu - offset;
    }
    // s cot s = 1/2 - nu + offset, polished by Newton from the double root.
    const ld target = 0.5L - nu + offset;
    ld s = std::sqrt(static_cast<ld>(lambda));
    for (int i = 0; i < 3; ++i) {
        const ld sn = std::sin(s);
        const ld cs = std::cos(s);
        const ld val = s * cs / sn - target;
        const ld der = cs / sn - s / (sn * sn);
        if (der == 0.0L) {
            break;
        }
        s -= val / der;
    }
    return s * s;
}

RadialSolution to_solution(const Shot& s, const LogGrid& grid, double E) {
    RadialSolution sol;
    sol.E = E;
    sol.step = grid.h;
    sol.cutoff_index = grid.n_in;
    sol.match_index = s.match;
    sol.mismatch = s.mismatch;
    sol.r = s.r;
    sol.coeff = s.f;
    sol.u.resize(s.y.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        sol.u[i] = s.y[i] * std::sqrt(s.r[i]);
        peak = std::max(peak, std::abs(sol.u[i]));
    }
    for (double& v : sol.u) {
        v /= peak;
    }
    int nodes = 0;
    double last = 0.0;
    for (double v : sol.u) {
        if (v != 0.0) {
            if (last != 0.0 && (v > 0.0) != (last > 0.0)) {
                ++nodes;
            }
            last = v;
        }
    }
    sol.node_count = nodes;
    return sol;
}

double mismatch_at(const Problem& base, double k, double h, const ShootOptions& opt) {
    Problem p = base;
    p.E = -(k * k);
    const double r_max = std::max(opt.decay_lengths / k, 4.0 * p.R);
    const LogGrid grid = make_grid(p.R, opt.inner_ratio * p.R, h, r_max);
    return run(p, grid).mismatch;
}

} // namespace

GridSpec default_grid(const Cutoff& cutoff, double k_estimate, int n_steps) {
    if (!(k_estimate > 0.0)) {
        throw DomainError("default_grid: k estimate must be positive");
    }
    return GridSpec{kDefaultInnerRatio * cutoff.R(),
                    std::max(kDefaultDecayLengths / k_estimate, 4.0 * cutoff.R()), n_steps};
}

RadialSolution integrate_radial(Scheme scheme, const Coupling& coupling, double lambda,
                                const Cutoff& cutoff, double E, const GridSpec& grid) {
    const Problem p = make_problem(scheme, coupling, lambda, cutoff, E);
    const double h = step_from_spec(cutoff.R(), grid);
    const LogGrid g = make_grid(cutoff.R(), grid.r_min, h, grid.r_max);
    return to_solution(run(p, g), g, E);
}

double log_derivative_at(const RadialSolution& sol, std::size_t i) {
    if (i == 0 || i + 1 >= sol.u.size() || i == sol.cutoff_index) {
        throw UsageError("log_derivative_at: node must be interior to one region");
    }
    if (i + 1 == sol.cutoff_index) {
        throw UsageError("log_derivative_at: stencil crosses the cutoff");
    }
    const double h6 = sol.step * sol.step / 6.0;
    auto y = [&](std::size_t j) { return sol.u[j] / std::sqrt(sol.r[j]); };
    const double dy = ((1.0 - h6 * sol.coeff[i + 1]) * y(i + 1) -
                       (1.0 - h6 * sol.coeff[i - 1]) * y(i - 1)) /
                      (2.0 * sol.step);
    return 0.5 + dy / y(i);
}

BindOutcome shoot_bound_state(Scheme scheme, const Coupling& coupling, const Extension& ext,
                              const Cutoff& cutoff, std::pair<double, double> E_bracket,
                              const ShootOptions& opt) {
    const auto [E_lo, E_hi] = E_bracket;
    if (!(E_lo < E_hi && E_hi < 0.0)) {
        throw UsageError("shoot_bound_state: need E_lo < E_hi < 0");
    }
    if (opt.n_steps < 16 || opt.subdivisions < 1 || !(opt.rel_tol > 0.0) ||
        !(opt.inner_ratio > 0.0 && opt.inner_ratio < 1.0) || !(opt.decay_lengths > 1.0)) {
        throw UsageError("shoot_bound_state: invalid options");
    }
    const FlowPoint fp = flow(scheme, coupling, ext, cutoff);
    const Problem base =
        make_problem(scheme, coupling, precise_lambda(scheme, coupling, ext, cutoff, fp.lambda), cutoff, E_hi);
    const double R = cutoff.R();

    const double k_lo = std::sqrt(-E_hi);
    const double k_hi = std::sqrt(-E_lo);
    auto step_for = [&](double k) {
        const double r_max = std::max(opt.decay_lengths / k, 4.0 * R);
        return std::log(r_max / (opt.inner_ratio * R)) / opt.n_steps;
    };

    // Coarse scan with one step size so that sign changes are comparable.
    const double h_scan = step_for(k_lo);
    const int n = opt.subdivisions;
    std::vector<double> ks(n + 1);
    std::vector<double> ms(n + 1);
    for (int j = 0; j <= n; ++j) {
        ks[j] = k_lo * std::pow(k_hi / k_lo, static_cast<double>(j) / n);
        ms[j] = mismatch_at(base, ks[j], h_scan, opt);
    }
    std::vector<int> brackets;
    for (int j = 0; j < n; ++j) {
        if ((ms[j] <= 0.0) != (ms[j + 1] <= 0.0)) {
            brackets.push_back(j);
        }
    }
    if (brackets.empty()) {
        return NoBoundState{"no sign change of the matching Casoratian for E in [" +
                            std::to_string(E_lo) + ", " + std::to_string(E_hi) + "]"};
    }
    if (brackets.size() > 1) {
        std::vector<double> roots;
        for (int j : brackets) {
            roots.push_back(std::sqrt(ks[j] * ks[j + 1]));
        }
        throw MultiplicityError("shoot_bound_state: " + std::to_string(brackets.size()) +
                                    " sign changes in the energy bracket",
                                roots);
    }

    const int j = brackets.front();
    double a = ks[j];
    double b = ks[j + 1];
    const double h = step_for(a);
    double fa = mismatch_at(base, a, h, opt);
    double fb = mismatch_at(base, b, h, opt);
    // The finer grid can shift the root across a scan node.
    if ((fa <= 0.0) == (fb <= 0.0)) {
        a = ks[std::max(j - 1, 0)];
        b = ks[std::min(j + 2, n)];
        fa = mismatch_at(base, a, h, opt);
        fb = mismatch_at(base, b, h, opt);
        if ((fa <= 0.0) == (fb <= 0.0)) {
            throw NumericalError("shoot_bound_state: lost the bracket on the refined grid",
                                 "k in [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        }
    }
    // Bisection in E; the relative E tolerance is twice the k tolerance.
    int iter = 0;
    while ((b * b - a * a) > opt.rel_tol * a * a) {
        if (++iter > 200) {
            throw NumericalError("shoot_bound_state: bisection did not converge",
                                 "k in [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        const double mid = std::sqrt(0.5 * (a * a + b * b));
        const double fm = mismatch_at(base, mid, h, opt);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm <= 0.0) == (fa <= 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    const double k = std::sqrt(0.5 * (a * a + b * b));
    BoundState st = BoundState::make(k, Method::OdeOracle, scheme, cutoff);

    Problem p = base;
    p.E = -(k * k);
    const LogGrid grid = make_grid(R, opt.inner_ratio * R, h, std::max(opt.decay_lengths / k, 4.0 * R));
    const RadialSolution sol = to_solution(run(p, grid), grid, p.E);
    if (sol.node_count != 0) {
        st.warnings.push_back("oracle solution has " + std::to_string(sol.node_count) +
                              " interior node(s)");
    }
    return st;
}

} // namespace invsq
