// SPDX-License-Identifier: MIT
#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqbsde/config.hpp"
#include "sqbsde/counterexamples.hpp"
#include "sqbsde/dual_mc.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/forward_model.hpp"
#include "sqbsde/generators.hpp"
#include "sqbsde/hj_solver.hpp"
#include "sqbsde/path_checks.hpp"
#include "sqbsde/pipeline.hpp"
#include "sqbsde/terminal_data.hpp"

namespace py = pybind11;
using namespace sqbsde;

namespace {

py::array_t<double> grid_array(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
    py::array_t<double> a({rows, cols});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::list checks_list(const std::vector<CheckOutcome>& cs) {
    py::list out;
    for (const auto& c : cs) {
        py::dict d;
        d["name"] = c.name;
        d["statistic"] = c.statistic;
        d["threshold"] = c.threshold;
        d["pass"] = c.pass;
        d["hard"] = c.hard;
        d["note"] = c.note;
        out.append(d);
    }
    return out;
}

py::dict report_dict(const CounterexampleReport& r) {
    py::dict d;
    d["construction"] = r.construction;
    d["checks"] = checks_list(r.checks);
    d["summary"] = r.summary;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Superquadratic BSDE solver core";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<ExtrapolationError>(m, "ExtrapolationError", base.ptr());
    py::register_exception<NoModulusError>(m, "NoModulusError", base.ptr());
    py::register_exception<NoFitError>(m, "NoFitError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());

    py::class_<Generator>(m, "Generator")
        .def_static("power", &Generator::power, py::arg("q"), py::arg("dim") = 1)
        .def_static("quadratic", &Generator::quadratic, py::arg("gamma"), py::arg("dim") = 1)
        .def_static("sampled", &Generator::sampled, py::arg("nodes"), py::arg("dim") = 1)
        .def("truncated", &Generator::truncated)
        .def("__call__", [](const Generator& g, double z) { return g(z); })
        .def("grad", [](const Generator& g, double z) { return g.grad(z).value; })
        .def("describe", &Generator::describe)
        .def("__repr__", &Generator::describe);

    py::class_<Conjugate>(m, "Conjugate")
        .def(py::init<Generator>())
        .def("__call__", [](const Conjugate& c, double x) { return c(x); })
        .def("maximizer", &Conjugate::maximizer);

    m.def("young_gap", py::overload_cast<const Generator&, const Conjugate&, double, double>(&young_gap));

    py::enum_<Side>(m, "Side").value("Lower", Side::Lower).value("Upper", Side::Upper);

    py::class_<TerminalCondition>(m, "TerminalCondition")
        .def_static("constant", &TerminalCondition::constant)
        .def_static("cosine", &TerminalCondition::cosine, py::arg("amplitude") = 1.0,
                    py::arg("frequency") = 1.0)
        .def_static("lorentzian", &TerminalCondition::lorentzian, py::arg("amplitude") = 1.0,
                    py::arg("center") = 0.0, py::arg("width") = 1.0)
        .def_static("gaussian", &TerminalCondition::gaussian, py::arg("amplitude") = 1.0,
                    py::arg("center") = 0.0, py::arg("width") = 1.0)
        .def_static("tanh_profile", &TerminalCondition::tanh_profile, py::arg("amplitude") = 1.0,
                    py::arg("width") = 1.0)
        .def_static("tabulated", &TerminalCondition::tabulated)
        .def_static("step", [](double jump, double low, double high) {
            return TerminalCondition::step(jump, low, high);
        })
        .def("regularized", &TerminalCondition::regularized)
        .def("__call__", [](const TerminalCondition& t, double x) { return t(x); })
        .def("sup_norm", &TerminalCondition::sup_norm)
        .def("describe", &TerminalCondition::describe);

    m.def("inf_convolution", &inf_convolution);
    m.def("sup_convolution", &sup_convolution);
    m.def("uniform_gap_bound", &uniform_gap_bound);

    py::class_<Drift>(m, "Drift")
        .def_static("zero", &Drift::zero)
        .def_static("linear", &Drift::linear)
        .def_static("tanh", &Drift::tanh)
        .def_static("sine", &Drift::sine)
        .def("describe", &Drift::describe);

    py::class_<ForwardModel>(m, "ForwardModel")
        .def(py::init<Drift, double, double, std::optional<double>>(), py::arg("drift"),
             py::arg("sigma"), py::arg("T"), py::arg("lam") = py::none())
        .def_property_readonly("sigma", &ForwardModel::sigma)
        .def_property_readonly("T", &ForwardModel::horizon)
        .def_property_readonly("lam", &ForwardModel::lambda);

    py::enum_<Dissipation>(m, "Dissipation")
        .value("Envelope", Dissipation::Envelope)
        .value("Adaptive", Dissipation::Adaptive);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("x_lo", &GridSpec::x_lo)
        .def_readwrite("x_hi", &GridSpec::x_hi)
        .def_readwrite("n_x", &GridSpec::n_x)
        .def_readwrite("n_t", &GridSpec::n_t)
        .def_readwrite("x0", &GridSpec::x0)
        .def_readwrite("window", &GridSpec::window)
        .def_readwrite("dissipation", &GridSpec::dissipation);

    py::class_<PdeSolution, std::shared_ptr<PdeSolution>>(m, "PdeSolution")
        .def_property_readonly("x", [](const PdeSolution& s) { return py::array_t<double>(s.x.size(), s.x.data()); })
        .def_property_readonly("t", [](const PdeSolution& s) { return py::array_t<double>(s.t.size(), s.t.data()); })
        .def_property_readonly("u", [](const PdeSolution& s) { return grid_array(s.u, s.n_levels(), s.n_x()); })
        .def_property_readonly("z", [](const PdeSolution& s) { return grid_array(s.z, s.n_levels(), s.n_x()); })
        .def_readonly("warnings", &PdeSolution::warnings)
        .def("value", &PdeSolution::value)
        .def("z_value", &PdeSolution::z_value);

    m.def("solve", [](const ForwardModel& model, const Generator& gen, const TerminalCondition& tc,
                      const GridSpec& grid, double t0) {
        py::gil_scoped_release release;
        return std::make_shared<PdeSolution>(solve(model, gen, tc, grid, t0));
    }, py::arg("model"), py::arg("gen"), py::arg("terminal"), py::arg("grid") = GridSpec{}, py::arg("t0") = 0.0);

    m.def("cole_hopf_reference", &cole_hopf_reference, py::arg("model"), py::arg("gen"),
          py::arg("terminal"), py::arg("t"), py::arg("x"), py::arg("nodes") = 64);

    m.def("duality_gap", [](const ForwardModel& model, const Generator& gen, const TerminalCondition& tc,
                            std::shared_ptr<PdeSolution> sol, double x0, double t0, std::size_t n_paths,
                            std::size_t n_steps, std::uint64_t seed, std::vector<double> constants,
                            double scheme_tol) {
        const DualityReport r = duality_gap(model, Conjugate(gen), tc, sol, x0, t0, n_paths, n_steps, seed,
                                            constants, scheme_tol);
        py::dict d;
        d["u0"] = r.u0;
        py::list rows;
        for (const auto& row : r.rows) {
            py::dict e;
            e["control"] = row.control;
            e["value"] = row.estimate.value;
            e["std_error"] = row.estimate.std_error;
            e["lower_bound_ok"] = row.lower_bound_ok;
            e["attainment_ok"] = row.attainment_ok;
            rows.append(e);
        }
        d["rows"] = rows;
        return d;
    }, py::arg("model"), py::arg("gen"), py::arg("terminal"), py::arg("solution"), py::arg("x0") = 0.0,
       py::arg("t0") = 0.0, py::arg("n_paths") = 10000, py::arg("n_steps") = 100, py::arg("seed") = 1,
       py::arg("constants") = std::vector<double>{}, py::arg("scheme_tol") = 1e-2);

    m.def("apriori_z_bound_ratio", [](const PdeSolution& sol, const ForwardModel& model, double sup) {
        return apriori_z_bound(sol, model, sup).worst_ratio;
    });

    m.def("thm31_report", [](double q, std::size_t K, double T) {
        return report_dict(thm31_series_report(build_thm31(q, K, T)));
    }, py::arg("q") = 3.0, py::arg("K") = 10000, py::arg("T") = 1.0);
    m.def("thm33_report", [](double q, int n, double theta, double eps, std::size_t K, std::size_t n_paths,
                             std::size_t n_steps, std::uint64_t seed) {
        return report_dict(simulate_thm33_excursion(build_thm33(q, n, theta, eps, K), n_paths, n_steps, seed));
    }, py::arg("q") = 3.0, py::arg("n") = 2, py::arg("theta") = 0.5, py::arg("epsilon") = 0.5,
       py::arg("K") = 8, py::arg("n_paths") = 10000, py::arg("n_steps") = 900, py::arg("seed") = 1);
    m.def("thm34_report", [](double q, std::size_t K, std::size_t n_paths, std::size_t n_steps,
                             std::uint64_t seed) {
        return report_dict(thm34_checks(build_thm34(q, K), n_paths, n_steps, seed));
    }, py::arg("q") = 3.0, py::arg("K") = 6, py::arg("n_paths") = 10000, py::arg("n_steps") = 1000,
       py::arg("seed") = 1);

    m.def("run_config", [](const std::string& json_text) {
        const RunConfig cfg = parse_config(json_text);
        RunResults r;
        {
            py::gil_scoped_release release;
            r = run(cfg);
        }
        py::dict d;
        d["label"] = r.label;
        d["checks"] = checks_list(r.checks);
        d["summary"] = r.summary;
        d["all_hard_pass"] = all_hard_pass(r.checks);
        return d;
    }, py::arg("config_json"), "Parse a JSON run config and execute it without writing files.");
}
