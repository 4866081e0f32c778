#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "invsq/errors.hpp"
#include "invsq/flow.hpp"
#include "invsq/oracle.hpp"
#include "invsq/specfun.hpp"
#include "invsq/spectrum.hpp"
#include "invsq/wavefunction.hpp"

namespace py = pybind11;
using namespace invsq;

namespace {

Coupling coupling_arg(std::optional<double> nu, std::optional<double> g) {
    if (nu.has_value() == g.has_value()) {
        throw UsageError("give exactly one of nu or g");
    }
    return nu ? Coupling::from_nu(*nu) : Coupling::from_g(*g);
}

py::object bound_k(const BindOutcome& o) {
    if (const auto* b = std::get_if<BoundState>(&o)) {
        return py::float_(b->k);
    }
    return py::none();
}

} // namespace

PYBIND11_MODULE(invsq, m) {
    m.doc() = "Renormalized inverse-square potential: flows, spectra and an ODE oracle";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<FlowPoleError>(m, "FlowPoleError", PyExc_ArithmeticError);
    py::register_exception<MultiplicityError>(m, "MultiplicityError", PyExc_RuntimeError);

    m.def("bessel_k", [](double nu, double z) { return specfun::bessel_k(specfun::Order(nu), z); },
          py::arg("nu"), py::arg("z"));
    m.def("gamma_ratio", [](double nu) { return specfun::gamma_ratio(specfun::Order(nu)); },
          py::arg("nu"), "Gamma(1 + nu) / Gamma(1 - nu)");

    m.def(
        "flow",
        [](const std::string& scheme, double c, double r0, double R, std::optional<double> nu,
           std::optional<double> g) {
            const FlowPoint p = flow(parse_scheme(scheme), coupling_arg(nu, g), Extension(c, r0),
                                     Cutoff(R, r0));
            py::dict d;
            d["lambda"] = p.lambda;
            d["branch_index"] = p.branch_index ? py::object(py::int_(*p.branch_index)) : py::none();
            return d;
        },
        py::arg("scheme"), py::arg("c"), py::arg("r0"), py::arg("R"), py::kw_only(),
        py::arg("nu") = py::none(), py::arg("g") = py::none());

    m.def(
        "closed_form_k",
        [](double c, double r0, std::optional<double> nu, std::optional<double> g) {
            return bound_k(closed_form_k(coupling_arg(nu, g), Extension(c, r0)));
        },
        py::arg("c"), py::arg("r0"), py::kw_only(), py::arg("nu") = py::none(),
        py::arg("g") = py::none(), "Bound-state momentum, or None when there is no bound state");

    m.def(
        "solve_exact",
        [](const std::string& scheme, double c, double r0, double R, std::optional<double> nu,
           std::optional<double> g) {
            return bound_k(solve_bound_state_exact(parse_scheme(scheme), coupling_arg(nu, g),
                                                   Extension(c, r0), Cutoff(R, r0)));
        },
        py::arg("scheme"), py::arg("c"), py::arg("r0"), py::arg("R"), py::kw_only(),
        py::arg("nu") = py::none(), py::arg("g") = py::none());

    m.def(
        "shoot",
        [](const std::string& scheme, double c, double r0, double R, double k_min, double k_max,
           std::optional<double> nu, std::optional<double> g, int n_steps) {
            ShootOptions opt;
            opt.n_steps = n_steps;
            return bound_k(shoot_bound_state(parse_scheme(scheme), coupling_arg(nu, g),
                                             Extension(c, r0), Cutoff(R, r0),
                                             {-(k_max * k_max), -(k_min * k_min)}, opt));
        },
        py::arg("scheme"), py::arg("c"), py::arg("r0"), py::arg("R"), py::arg("k_min"),
        py::arg("k_max"), py::kw_only(), py::arg("nu") = py::none(), py::arg("g") = py::none(),
        py::arg("n_steps") = kDefaultSteps, "Numerov shooting for k in [k_min, k_max]");

    m.def(
        "wave",
        [](const std::string& scheme, double c, double r0, double R, const std::vector<double>& r,
           std::optional<double> nu, std::optional<double> g, std::optional<double> k) {
            const Coupling cp = coupling_arg(nu, g);
            const Extension ext(c, r0);
            const Cutoff cut(R, r0);
            const PiecewiseWave w =
                k ? normalize(PiecewiseWave::bound_state(parse_scheme(scheme), cp, ext, cut, *k))
                  : PiecewiseWave::zero_energy(parse_scheme(scheme), cp, ext, cut);
            std::vector<double> u;
            u.reserve(r.size());
            for (double x : r) {
                u.push_back(eval_wave(w, x));
            }
            return u;
        },
        py::arg("scheme"), py::arg("c"), py::arg("r0"), py::arg("R"), py::arg("r"), py::kw_only(),
        py::arg("nu") = py::none(), py::arg("g") = py::none(), py::arg("k") = py::none(),
        "Normalized bound-state wave when k is given, zero-energy wave otherwise");
}
