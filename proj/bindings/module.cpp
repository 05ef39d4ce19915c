// Python bindings for the genus-2 Kleinian function library.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "g2k/abel.hpp"
#include "g2k/thetaref.hpp"

namespace py = pybind11;
using namespace g2k;

namespace {

Vec2c to_vec2(const std::pair<cplx, cplx>& z) { return Vec2c(z.first, z.second); }

CPoly poly_from_list(const std::vector<cplx>& coeffs) {
    if (coeffs.size() > 7) throw input_error("polynomial degree exceeds 6");
    std::vector<cplx> c = coeffs;
    c.resize(7, 0.0);
    return CPoly(c);
}

py::dict svec_dict(const SVec& sv) {
    py::dict d;
    d["s"] = Vec4c(sv.s);
    d["ds1"] = Vec4c(sv.ds1);
    d["ds2"] = Vec4c(sv.ds2);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Genus-2 Kleinian functions, period matrices, and the Abel map";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<convergence_error>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<certificate_error>(m, "CertificateError", PyExc_RuntimeError);

    py::class_<Disk>(m, "Disk")
        .def(py::init([](cplx center, double radius, bool exterior) {
                 return Disk{center, radius, exterior};
             }),
             py::arg("center"), py::arg("radius"), py::arg("exterior") = false)
        .def_readonly("center", &Disk::center)
        .def_readonly("radius", &Disk::radius)
        .def_readonly("exterior", &Disk::exterior);

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_static("finite", &CurvePoint::finite, py::arg("x"), py::arg("y"))
        .def_static("at_infinity", &CurvePoint::at_infinity, py::arg("a"))
        .def_readonly("infinite", &CurvePoint::infinite)
        .def_readonly("x", &CurvePoint::x)
        .def_readonly("y", &CurvePoint::y)
        .def_readonly("a", &CurvePoint::a);

    py::class_<AbelResult>(m, "AbelResult")
        .def_property_readonly("z", [](const AbelResult& r) { return Vec2c(r.z); })
        .def_readonly("sign_ambiguous", &AbelResult::sign_ambiguous)
        .def_readonly("cert_residual", &AbelResult::cert_residual);

    py::class_<KleinianContext>(m, "Context")
        .def(py::init([](const std::vector<cplx>& coeffs, std::optional<std::array<Disk, 3>> disks,
                         double tower_tol, double fit_tol, std::uint64_t seed) {
                 std::optional<DiskTriple> dt;
                 if (disks) dt = DiskTriple{(*disks)[0], (*disks)[1], (*disks)[2]};
                 return make_context(poly_from_list(coeffs), dt, tower_tol, fit_tol, seed);
             }),
             py::arg("coefficients"), py::arg("disks") = std::nullopt,
             py::arg("tower_tol") = 1e-13, py::arg("fit_tol") = 1e-9, py::arg("seed") = 1,
             "Build an evaluation context from polynomial coefficients "
             "(ascending degree) defining y^2 = f(x).")
        .def_property_readonly("num_steps",
                               [](const KleinianContext& c) { return c.tower.steps.size(); })
        .def_property_readonly("gap_history",
                               [](const KleinianContext& c) { return c.tower.gap_history; })
        .def_property_readonly("W", [](const KleinianContext& c) { return Mat23c(c.periods.W); })
        .def_property_readonly("E", [](const KleinianContext& c) { return Mat23c(c.periods.E); })
        .def_property_readonly("A", [](const KleinianContext& c) { return Mat2c(c.periods.A); })
        .def_property_readonly("B", [](const KleinianContext& c) { return Mat2c(c.periods.B); })
        .def_property_readonly("omega",
                               [](const KleinianContext& c) { return Mat2c(c.periods.omega); })
        .def_property_readonly("quasi_reduced",
                               [](const KleinianContext& c) { return c.periods.quasi_reduced; })
        .def(
            "eval_S",
            [](const KleinianContext& c, const std::pair<cplx, cplx>& z) {
                return svec_dict(eval_S(c, to_vec2(z)));
            },
            py::arg("z"),
            "S-vector (S, S22, S12, S11) and its z-partials via the Richelot tower.")
        .def(
            "oracle_S",
            [](const KleinianContext& c, const std::pair<cplx, cplx>& z) {
                return svec_dict(oracle_S(c.periods, to_vec2(z)));
            },
            py::arg("z"), "Same values through the independent theta-series oracle.")
        .def(
            "wp",
            [](const KleinianContext& c, const std::pair<cplx, cplx>& z) {
                auto p = wp(c, to_vec2(z));
                return py::make_tuple(p[0], p[1], p[2]);
            },
            py::arg("z"), "(wp22, wp12, wp11) at z.")
        .def(
            "sigma_zeta",
            [](const KleinianContext& c, const std::pair<cplx, cplx>& z) {
                auto s = sigma_zeta(c, to_vec2(z));
                return py::make_tuple(s[0], s[1], s[2]);
            },
            py::arg("z"), "(sigma(2z), zeta1(z), zeta2(z)) for a degree-5 curve.")
        .def(
            "abel",
            [](const KleinianContext& c, const CurvePoint& p, const CurvePoint& q,
               std::uint64_t seed) { return abel_map(c, Divisor2{p, q}, seed); },
            py::arg("p"), py::arg("q"), py::arg("seed") = 1,
            "Abel map of the degree-2 divisor (p) + (q).");

    m.def(
        "on_curve_residual",
        [](const std::vector<cplx>& coeffs, const CurvePoint& p) {
            return on_curve_residual(poly_from_list(coeffs), p);
        },
        py::arg("coefficients"), py::arg("point"));
}
