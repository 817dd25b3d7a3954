#include "liouville/acceptance.hpp"
#include "liouville/convexity.hpp"
#include "liouville/errors.hpp"
#include "liouville/io.hpp"
#include "liouville/normal_form.hpp"
#include "liouville/oracle.hpp"
#include "liouville/separatrix.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace liouville;

namespace {

py::dict morse_dict(const MorseProfile& p) {
    py::list crit;
    for (const auto& c : p.criticals)
        crit.append(py::dict(py::arg("theta") = c.location, py::arg("value") = c.value,
                             py::arg("kind") = c.kind == CriticalKind::maximum ? "max" : "min"));
    return py::dict(py::arg("criticals") = crit, py::arg("beta") = p.beta, py::arg("n_wells") = p.n_wells,
                    py::arg("max_second_derivative") = p.max_second_derivative);
}

SingularRep fit_edge(const ActionMap& m, int region, const std::string& branch, int degree) {
    const Branch b = parse_branch(branch);
    FitOptions fo;
    fo.degree = degree;
    fo.expected_sign = expected_psi_sign(m, region, b);
    return fit_singular_rep(singular_samples(m, region, b, branch_grid(m, region)), fo);
}

}  // namespace

PYBIND11_MODULE(_liouville, m) {
    m.doc() = "action-angle data for one-degree-of-freedom standard-form Hamiltonians";

    static py::exception<Error> error(m, "LiouvilleError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<PeriodicPotential>(m, "PeriodicPotential")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("cos"), py::arg("sin") = std::vector<double>{})
        .def_static("cosine", &PeriodicPotential::cosine, py::arg("amplitude") = 1.0, py::arg("k") = 1)
        .def("__call__", py::overload_cast<double>(&PeriodicPotential::operator(), py::const_))
        .def("__call__", py::overload_cast<cplx>(&PeriodicPotential::operator(), py::const_))
        .def("derivative_at", py::overload_cast<double, int>(&PeriodicPotential::derivative_at, py::const_))
        .def_property_readonly("cos_coeffs", &PeriodicPotential::cos_coeffs)
        .def_property_readonly("sin_coeffs", &PeriodicPotential::sin_coeffs)
        .def("sup_on_strip", &PeriodicPotential::sup_on_strip, py::arg("s"), py::arg("samples") = 1024);

    m.def(
        "analyze_morse",
        [](const PeriodicPotential& G, bool require_distinct) {
            MorseOptions o;
            o.require_distinct = require_distinct;
            return morse_dict(analyze_morse(G, o));
        },
        py::arg("G"), py::arg("require_distinct") = true);
    m.def("morse_beta", &morse_beta, py::arg("G"), py::arg("tol_root") = 1e-9);
    m.def("phase_shift", [](const PeriodicPotential& w, double tol) {
        const auto r = phase_shift_b(w, tol);
        return py::dict(py::arg("b") = r.b, py::arg("g_hat0") = r.g_hat0, py::arg("sup_quarter") = r.sup_quarter,
                        py::arg("residual") = r.residual);
    });

    py::class_<StandardFormHamiltonian>(m, "StandardFormHamiltonian")
        .def("value", &StandardFormHamiltonian::value, py::arg("p1"), py::arg("p_hat"), py::arg("q"))
        .def_property_readonly("eps", [](const StandardFormHamiltonian& H) { return H.chars.eps; })
        .def_property_readonly("beta", [](const StandardFormHamiltonian& H) { return H.chars.beta; })
        .def_property_readonly("mu", [](const StandardFormHamiltonian& H) { return H.chars.mu; })
        .def("to_json", [](const StandardFormHamiltonian& H) { return io::to_json(H).dump(); });
    m.def("make_standard_form", &make_standard_form, py::arg("G0"), py::arg("nu") = PeriodicPotential{},
          py::arg("s0") = 1.0);
    m.def("pendulum", &pendulum, py::arg("eps") = 1.0);
    m.def("validate_standard_form", [](const StandardFormHamiltonian& H) {
        const auto r = validate_standard_form(H);
        return py::dict(py::arg("valid") = r.valid(), py::arg("mu") = r.mu_measured, py::arg("kappa") = r.kappa,
                        py::arg("failures") = r.failures);
    });

    py::class_<ActionMap>(m, "ActionMap")
        .def(py::init([](const StandardFormHamiltonian& H, double energy_scale) {
                 ActionMapOptions o;
                 o.energy_scale = energy_scale;
                 return ActionMap(H, {}, o);
             }),
             py::arg("H"), py::arg("energy_scale") = 0.0)
        .def_property_readonly("n_regions", &ActionMap::n_regions)
        .def("region_kind", [](const ActionMap& a, int i) { return region_label(a.kind(i)); })
        .def("window",
             [](const ActionMap& a, int i) {
                 const auto w = a.window(i);
                 return py::make_tuple(w.E_minus, w.E_plus);
             })
        .def("action", py::overload_cast<int, double>(&ActionMap::action, py::const_))
        .def("dIdE", py::overload_cast<int, double>(&ActionMap::dIdE, py::const_))
        .def("d2IdE2", py::overload_cast<int, double>(&ActionMap::d2IdE2, py::const_))
        .def("action_near_plus", [](const ActionMap& a, int i, double z) { return a.action(i, a.near_plus(i, z)); })
        .def("action_near_minus", [](const ActionMap& a, int i, double z) { return a.action(i, a.near_minus(i, z)); })
        .def("period", &ActionMap::period)
        .def("energy_of_action", &ActionMap::energy_of_action)
        .def("d2E_dI2", [](const ActionMap& a, int i, double E) { return d2E_dI2(a, i, E); });

    py::class_<SingularRep>(m, "SingularRep")
        .def_readonly("phi", &SingularRep::phi)
        .def_readonly("psi", &SingularRep::psi)
        .def_readonly("fit_residual", &SingularRep::fit_residual)
        .def_property_readonly("psi0", &SingularRep::psi0)
        .def_property_readonly("phi0", &SingularRep::phi0)
        .def("__call__", &SingularRep::value)
        .def("complex", [](const SingularRep& r, cplx z) { return complex_action_eval(r, z); });
    m.def("fit_separatrix", &fit_edge, py::arg("map"), py::arg("region"), py::arg("branch") = "plus",
          py::arg("degree") = 6);
    m.def("psi_zero_prediction", &psi_zero_prediction, py::arg("g"), py::arg("eps"));

    m.def(
        "normal_form",
        [](const StandardFormHamiltonian& H, int critical, int order, double energy_scale) {
            NormalFormOptions o;
            o.order = order;
            const auto d = birkhoff_normalize(H, critical, {}, o, energy_scale).data;
            return py::dict(py::arg("kind") = nf_kind_label(d.kind), py::arg("theta_c") = d.theta_c,
                            py::arg("E_c") = d.E_c, py::arg("g") = d.g, py::arg("delta") = d.delta,
                            py::arg("R") = d.R, py::arg("residual") = d.residual, py::arg("c0") = d.c0);
        },
        py::arg("H"), py::arg("critical") = 0, py::arg("order") = 6, py::arg("energy_scale") = 0.0);

    m.def("a0_ratio", &a0_ratio);
    m.def("pendulum_action", [](double E, double eps, bool rotation) {
        return oracle::pendulum_action(E, eps, rotation ? oracle::PendulumRegion::rotation
                                                        : oracle::PendulumRegion::libration);
    });

    m.def(
        "run_acceptance",
        [](bool quick, std::vector<int> only, const std::string& golden) {
            AcceptanceOptions o;
            o.quick = quick;
            o.only = std::move(only);
            o.golden_path = golden;
            py::list out;
            for (const auto& r : run_acceptance(o))
                out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("passed") = r.passed,
                                    py::arg("detail") = r.detail));
            return out;
        },
        py::arg("quick") = false, py::arg("only") = std::vector<int>{}, py::arg("golden") = "");
}
