#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gaugedyn/cli.hpp"
#include "gaugedyn/covering.hpp"
#include "gaugedyn/distortion.hpp"
#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/errors.hpp"
#include "gaugedyn/linearizer.hpp"
#include "gaugedyn/logtransform.hpp"
#include "gaugedyn/mittag.hpp"
#include "gaugedyn/verify.hpp"

namespace py = pybind11;
using namespace gaugedyn;

namespace {

Rect to_rect(const std::array<double, 4>& b) { return Rect{b[0], b[1], b[2], b[3]}; }

// Rows top first, matching the PGM layout.
py::array_t<std::uint8_t> mask_array(const BoolGrid& g) {
    py::array_t<std::uint8_t> a({g.ny(), g.nx()});
    auto v = a.mutable_unchecked<2>();
    for (std::size_t r = 0; r < g.ny(); ++r)
        for (std::size_t i = 0; i < g.nx(); ++i) v(r, i) = g.at(i, g.ny() - 1 - r) ? 1 : 0;
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gauged Hausdorff measure experiments for entire transcendental dynamics";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
    py::register_exception<IllConditionedError>(m, "IllConditionedError", PyExc_ArithmeticError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ExpParams>(m, "ExpParams")
        .def_readonly("lambda_", &ExpParams::lambda)
        .def_readonly("q", &ExpParams::q)
        .def_readonly("beta", &ExpParams::beta);
    m.def("solve_fixed_points", &solve_fixed_points, py::arg("lambda_"));
    m.def("koenigs_coefficients", [](double lambda, std::size_t order) {
        return koenigs_series(solve_fixed_points(lambda), order).coeffs;
    }, py::arg("lambda_"), py::arg("order") = kDefaultSeriesOrder);

    py::class_<GaugeSpec>(m, "Gauge")
        .def(py::init([](double lambda, double gamma) { return make_gauge(lambda, gamma); }), py::arg("lambda_"),
             py::arg("gamma"))
        .def_readonly("gamma", &GaugeSpec::gamma)
        .def_property_readonly("beta", [](const GaugeSpec& g) { return g.params().beta; })
        .def("phi", &phi, py::arg("x"))
        .def("phi_log", &phi_log, py::arg("log_x"))
        .def("h", &gauge_h, py::arg("t"))
        .def("log_h", &log_gauge_h, py::arg("log_t"));
    m.def("gauge_equivalence_ratio", [](const GaugeSpec& a, const GaugeSpec& b, const std::vector<double>& t) {
        const auto r = gauge_equivalence_ratio(a, b, t);
        return py::make_tuple(r.min_ratio, r.max_ratio);
    });

    m.def("ml_series", &ml_series, py::arg("rho"), py::arg("z"), py::arg("tol") = 1e-20, py::arg("max_terms") = 10000);
    m.def("ml_series_log", &ml_series_log, py::arg("rho"), py::arg("z"), py::arg("tol") = 1e-20,
          py::arg("max_terms") = 10000);
    py::class_<MLParams>(m, "MLParams")
        .def(py::init([](double rho) { return make_ml_params(rho); }), py::arg("rho"))
        .def_readonly("rho", &MLParams::rho)
        .def_readonly("log_a", &MLParams::log_a)
        .def_readonly("R", &MLParams::R)
        .def_readonly("delta", &MLParams::delta)
        .def_readonly("C0", &MLParams::C0)
        .def_readonly("r_switch", &MLParams::r_switch)
        .def("log_f", &ml_log, py::arg("z"))
        .def("log_af", &ml_eval, py::arg("z"));

    py::class_<FamilyMember>(m, "Family")
        .def_static("exponential", py::overload_cast<double>(&make_exponential), py::arg("lambda_"))
        .def_static("mittag_leffler", [](double rho) { return make_mittag_leffler(rho); }, py::arg("rho"))
        .def_readonly("id", &FamilyMember::id)
        .def_readonly("attractor", &FamilyMember::attractor)
        .def("log_eval", &log_eval, py::arg("z"))
        .def("classify", [](const FamilyMember& f, cplx z, std::size_t n) { return to_string(classify(f, z, n)); },
             py::arg("z"), py::arg("n_max") = 100);
    m.def("escape_scan", [](const FamilyMember& f, const std::array<double, 4>& bbox, std::size_t nx, std::size_t ny,
                            std::size_t n_max, unsigned threads) {
        return mask_array(escape_scan(f, to_rect(bbox), nx, ny, n_max, kDefaultBailout, threads));
    }, py::arg("family"), py::arg("bbox"), py::arg("nx"), py::arg("ny"), py::arg("n_max") = 100, py::arg("threads") = 1);
    m.def("tract_scan", [](const FamilyMember& f, const std::array<double, 4>& bbox, std::size_t nx, std::size_t ny,
                           unsigned threads) {
        return mask_array(tract_scan(f, to_rect(bbox), nx, ny, threads).in_tract);
    }, py::arg("family"), py::arg("bbox"), py::arg("nx"), py::arg("ny"), py::arg("threads") = 1);
    m.def("order_estimate", [](const FamilyMember& f, const std::vector<double>& r) { return order_estimate(f, r).slope; });
    m.def("expansion_bound_check", [](const FamilyMember& f, const std::vector<cplx>& z) {
        return expansion_bound_check(f, z);
    });

    m.def("besicovitch_cover", [](const std::vector<std::pair<cplx, double>>& req) {
        const auto r = besicovitch_cover(req);
        return py::make_tuple(r.chosen, r.max_overlap);
    }, py::arg("requests"));
    m.def("gamma_thresholds", [](double rho, double c3, double M, std::size_t N0, double lambda, double eps) {
        const auto g = gamma_thresholds(rho, c3, M, N0, solve_fixed_points(lambda), eps);
        return py::make_tuple(g.lower, g.upper);
    }, py::arg("rho"), py::arg("c3"), py::arg("M"), py::arg("N0"), py::arg("lambda_"), py::arg("eps") = 0.0);
    m.def("mcmullen_log_product", [](const GaugeSpec& g, double x0, const std::vector<double>& delta) {
        return mcmullen_product_orbit(g, x0, delta).log_P;
    }, py::arg("gauge"), py::arg("x0"), py::arg("delta"));

    m.def("koebe_derivative_bounds", [](double r, double d0, double s) {
        const auto b = koebe_derivative_bounds(r, d0, s);
        return py::make_tuple(b.lo, b.hi);
    });
    m.def("mobius_distortion_on_disk", [](cplx a, cplx b, cplx c, cplx d, cplx z0, double r) {
        return Mobius{a, b, c, d}.distortion_on_disk(z0, r);
    });

    m.def("run_suite", [](const std::string& suite, unsigned threads) {
        std::vector<py::tuple> out;
        for (const auto& l : run_suite(suite, threads)) out.push_back(py::make_tuple(l.suite, l.name, l.pass, l.detail));
        return out;
    }, py::arg("suite") = "all", py::arg("threads") = 1);

    m.def("cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"gaugedyn"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
            py::gil_scoped_release release;
            code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command line in process; returns (exit status, stdout, stderr).");
}
