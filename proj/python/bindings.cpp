#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "sospec/enclosure.hpp"
#include "sospec/fem.hpp"
#include "sospec/operator_model.hpp"
#include "sospec/pencil.hpp"
#include "sospec/serialize.hpp"
#include "sospec/toy_models.hpp"
#include "sospec/types.hpp"

namespace py = pybind11;
using namespace sospec;

PYBIND11_MODULE(_sospec, m) {
  m.doc() =
      "Second order relative spectra of self-adjoint operators: quadratic "
      "pencils over trial subspaces, spectral enclosures, and Hermite finite "
      "element assembly.";

  py::register_exception<PreconditionError>(m, "PreconditionError",
                                            PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  // ---- core types ----------------------------------------------------------

  py::class_<ClusterConfig>(m, "ClusterConfig")
      .def(py::init<>())
      .def_readwrite("rel_tol", &ClusterConfig::rel_tol)
      .def_readwrite("abs_floor", &ClusterConfig::abs_floor)
      .def_readwrite("rank_tol", &ClusterConfig::rank_tol)
      .def_readwrite("defect_rel_tol", &ClusterConfig::defect_rel_tol);

  py::class_<SpectralPoint>(m, "SpectralPoint")
      .def_readonly("value", &SpectralPoint::value)
      .def_readonly("algebraic_mult", &SpectralPoint::algebraic_mult)
      .def_readonly("geometric_mult", &SpectralPoint::geometric_mult)
      .def("__repr__", [](const SpectralPoint& p) {
        return "SpectralPoint(value=(" + std::to_string(p.value.real()) + "+" +
               std::to_string(p.value.imag()) + "j), algebraic_mult=" +
               std::to_string(p.algebraic_mult) + ", geometric_mult=" +
               std::to_string(p.geometric_mult) + ")";
      });

  py::class_<SecondOrderSpectrum>(m, "SecondOrderSpectrum")
      .def_readonly("points", &SecondOrderSpectrum::points)
      .def_readonly("cluster_tol", &SecondOrderSpectrum::cluster_tol)
      .def_readonly("scale", &SecondOrderSpectrum::scale)
      .def("total_algebraic", &SecondOrderSpectrum::total_algebraic);

  py::class_<RealEigenvalue>(m, "RealEigenvalue")
      .def_readonly("value", &RealEigenvalue::value)
      .def_readonly("multiplicity", &RealEigenvalue::multiplicity);

  py::class_<PencilTriple>(m, "PencilTriple")
      .def(py::init([](const Matrix& m0, const Matrix& m1, const Matrix& m2) {
             return PencilTriple{m0, m1, m2};
           }),
           py::arg("m0"), py::arg("m1"), py::arg("m2"))
      .def_readwrite("m0", &PencilTriple::m0)
      .def_readwrite("m1", &PencilTriple::m1)
      .def_readwrite("m2", &PencilTriple::m2)
      .def("n", &PencilTriple::n)
      .def("is_real", &PencilTriple::is_real)
      .def("q", &PencilTriple::q, py::arg("z"));

  // ---- operator models -----------------------------------------------------

  py::class_<OperatorModel>(m, "OperatorModel");

  py::class_<DiagonalModel, OperatorModel>(m, "DiagonalModel")
      .def(py::init<RealVector, Matrix>(), py::arg("eigenvalues"),
           py::arg("trial_basis"))
      .def_property_readonly("eigenvalues", &DiagonalModel::ambient)
      .def_property_readonly("trial_basis", &DiagonalModel::trial)
      .def("with_basis_change", &DiagonalModel::with_basis_change,
           py::arg("change"))
      .def("mobius_mapped", &DiagonalModel::mobius_mapped, py::arg("a"),
           py::arg("b"), py::arg("c"), py::arg("d"));

  py::class_<MatrixModel, OperatorModel>(m, "MatrixModel")
      .def(py::init<Matrix, Matrix>(), py::arg("matrix"),
           py::arg("trial_basis"));

  // ---- toy model builders --------------------------------------------------

  py::class_<PollutionSpec>(m, "PollutionSpec")
      .def(py::init<>())
      .def_readwrite("lambda_minus", &PollutionSpec::lambda_minus)
      .def_readwrite("lambda_plus", &PollutionSpec::lambda_plus)
      .def_readwrite("targets", &PollutionSpec::targets)
      .def_readwrite("offset", &PollutionSpec::offset);

  py::class_<PrescribedPointSpec>(m, "PrescribedPointSpec")
      .def(py::init<>())
      .def_readwrite("c1", &PrescribedPointSpec::c1)
      .def_readwrite("c2", &PrescribedPointSpec::c2)
      .def_readwrite("c3", &PrescribedPointSpec::c3)
      .def_readwrite("z", &PrescribedPointSpec::z)
      .def_readwrite("delta", &PrescribedPointSpec::delta);

  m.def("diagonal_pair_model", &diagonal_pair_model, py::arg("n"));
  m.def("diagonal_pair_exact_spec2", &diagonal_pair_exact_spec2, py::arg("n"));
  m.def("semi_bounded_model", &semi_bounded_model, py::arg("n"), py::arg("r"));
  m.def("semi_bounded_exact_spec2", &semi_bounded_exact_spec2, py::arg("n"),
        py::arg("r"));
  m.def("pollution_model", &pollution_model, py::arg("spec"));
  m.def("pollution_exact_spec2", &pollution_exact_spec2, py::arg("spec"));
  m.def("rank_rotation_model", &rank_rotation_model, py::arg("n"),
        py::arg("beta"));
  m.def("rank_rotation_exact_spec2", &rank_rotation_exact_spec2, py::arg("n"),
        py::arg("beta"));
  m.def("prescribed_point_admissible", &prescribed_point_admissible,
        py::arg("spec"));
  m.def("prescribed_point_model", &prescribed_point_model, py::arg("spec"));
  m.def(
      "prescribed_set_model",
      [](const std::vector<PrescribedPointSpec>& specs) {
        return prescribed_set_model(specs);
      },
      py::arg("specs"));
  m.def("toy_cluster_config", &toy_cluster_config);

  // ---- pencil operations ---------------------------------------------------

  m.def(
      "assemble_pencil",
      [](const OperatorModel& model) { return assemble_pencil(model); },
      py::arg("model"));
  m.def(
      "second_order_spectrum",
      [](const PencilTriple& p, const ClusterConfig& cfg) {
        return second_order_spectrum(p, cfg);
      },
      py::arg("pencil"), py::arg("config") = ClusterConfig{});
  m.def(
      "second_order_spectrum_shift_invert",
      [](const PencilTriple& p, double mu, const ClusterConfig& cfg) {
        return second_order_spectrum_shift_invert(p, mu, cfg);
      },
      py::arg("pencil"), py::arg("shift"), py::arg("config") = ClusterConfig{});
  m.def("galerkin_spectrum", &galerkin_spectrum, py::arg("pencil"));
  m.def(
      "sigma",
      [](const PencilTriple& p, Complex z) { return sigma(p, z); },
      py::arg("pencil"), py::arg("z"));
  m.def("mobius_image", &mobius_image, py::arg("spectrum"), py::arg("a"),
        py::arg("b"), py::arg("c"), py::arg("d"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double re_lo, double re_hi, double im_lo, double im_hi,
                       int n_re, int n_im) {
             GridSpec g;
             g.re_lo = re_lo;
             g.re_hi = re_hi;
             g.im_lo = im_lo;
             g.im_hi = im_hi;
             g.n_re = n_re;
             g.n_im = n_im;
             return g;
           }),
           py::arg("re_lo"), py::arg("re_hi"), py::arg("im_lo"),
           py::arg("im_hi"), py::arg("n_re"), py::arg("n_im"))
      .def_readwrite("re_lo", &GridSpec::re_lo)
      .def_readwrite("re_hi", &GridSpec::re_hi)
      .def_readwrite("im_lo", &GridSpec::im_lo)
      .def_readwrite("im_hi", &GridSpec::im_hi)
      .def_readwrite("n_re", &GridSpec::n_re)
      .def_readwrite("n_im", &GridSpec::n_im);

  m.def(
      "sigma_map",
      [](const PencilTriple& p, const GridSpec& g) { return sigma_map(p, g); },
      py::arg("pencil"), py::arg("grid"));

  // ---- enclosures ----------------------------------------------------------

  py::class_<GapInterval>(m, "GapInterval")
      .def(py::init([](double a, double b) {
             return GapInterval{a, b};
           }),
           py::arg("a"), py::arg("b"))
      .def_readwrite("a", &GapInterval::a)
      .def_readwrite("b", &GapInterval::b)
      .def("a_finite", &GapInterval::a_finite)
      .def("b_finite", &GapInterval::b_finite)
      .def("disk_contains", &GapInterval::disk_contains, py::arg("z"))
      .def("__repr__", [](const GapInterval& g) {
        return "GapInterval(a=" + format_double(g.a) +
               ", b=" + format_double(g.b) + ")";
      });

  py::class_<EnclosureInterval>(m, "EnclosureInterval")
      .def_readonly("lo", &EnclosureInterval::lo)
      .def_readonly("hi", &EnclosureInterval::hi)
      .def_readonly("point", &EnclosureInterval::point)
      .def_property_readonly("source",
                             [](const EnclosureInterval& e) {
                               return e.source ==
                                              EnclosureInterval::Source::residual
                                          ? "residual"
                                          : "improved";
                             })
      .def("width", &EnclosureInterval::width)
      .def("outward", &EnclosureInterval::outward)
      .def("__repr__", [](const EnclosureInterval& e) {
        return std::string("EnclosureInterval(") +
               (e.source == EnclosureInterval::Source::residual ? "residual"
                                                                : "improved") +
               ", lo=" + format_double(e.lo) + ", hi=" + format_double(e.hi) +
               ")";
      });

  py::class_<EnclosureRow>(m, "EnclosureRow")
      .def_readonly("label", &EnclosureRow::label)
      .def_readonly("interval", &EnclosureRow::interval);

  m.def("residual_interval", &residual_interval, py::arg("z"));
  m.def("improved_interval", &improved_interval, py::arg("z"), py::arg("gap"));
  m.def("tightened_interval", &tightened_interval, py::arg("z"), py::arg("gap"));
  m.def("alpha_lower_bound", &alpha_lower_bound, py::arg("z"), py::arg("a"),
        py::arg("b"));
  m.def(
      "isolation_radius",
      [](double lambda, const std::vector<double>& rest) {
        return isolation_radius(lambda, rest);
      },
      py::arg("eigenvalue"), py::arg("rest_of_spectrum"));
  m.def(
      "pair_and_enclose",
      [](const SecondOrderSpectrum& s, const std::vector<GapInterval>& gaps) {
        return pair_and_enclose(s, gaps);
      },
      py::arg("spectrum"), py::arg("gaps"));

  py::class_<ClusterBoundConstants>(m, "ClusterBoundConstants")
      .def_readonly("gamma", &ClusterBoundConstants::gamma)
      .def_readonly("kappa", &ClusterBoundConstants::kappa)
      .def_readonly("d", &ClusterBoundConstants::d)
      .def_readonly("eps_max", &ClusterBoundConstants::eps_max)
      .def_readonly("m", &ClusterBoundConstants::m)
      .def_readonly("s", &ClusterBoundConstants::s)
      .def("__repr__", [](const ClusterBoundConstants& c) {
        return "ClusterBoundConstants(gamma=" + std::to_string(c.gamma) +
               ", kappa=" + std::to_string(c.kappa) +
               ", d=" + std::to_string(c.d) +
               ", eps_max=" + std::to_string(c.eps_max) + ")";
      });

  m.def(
      "cluster_bound_constants",
      [](double a, double b, int mult, int s,
         const std::vector<double>& spectrum_outside,
         const std::vector<double>& lambdas_inside) {
        return cluster_bound_constants(a, b, mult, s, spectrum_outside,
                                       lambdas_inside);
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("s"),
      py::arg("spectrum_outside"),
      py::arg("lambdas_inside") = std::vector<double>{});

  // ---- finite elements -----------------------------------------------------

  py::class_<UniformMesh>(m, "UniformMesh")
      .def(py::init([](double x_lo, double x_hi, int n_elem) {
             return UniformMesh{x_lo, x_hi, n_elem};
           }),
           py::arg("x_lo"), py::arg("x_hi"), py::arg("n_elem"))
      .def_readwrite("x_lo", &UniformMesh::x_lo)
      .def_readwrite("x_hi", &UniformMesh::x_hi)
      .def_readwrite("n_elem", &UniformMesh::n_elem)
      .def("h", &UniformMesh::h)
      .def("node", &UniformMesh::node, py::arg("i"));

  py::class_<Potential>(m, "Potential")
      .def_readonly("name", &Potential::name)
      .def("__call__", &Potential::operator(), py::arg("x"))
      .def_static("zero", &Potential::zero)
      .def_static("mathieu", &Potential::mathieu)
      .def_static("crystal", &Potential::crystal)
      .def_static("custom", &Potential::custom, py::arg("f"))
      .def_static("by_name", &Potential::by_name, py::arg("name"));

  py::class_<QuadratureRule>(m, "QuadratureRule")
      .def_readonly("nodes", &QuadratureRule::nodes)
      .def_readonly("weights", &QuadratureRule::weights)
      .def_static("gauss_legendre", &QuadratureRule::gauss_legendre,
                  py::arg("n_points"));

  py::class_<HermiteSpace>(m, "HermiteSpace")
      .def(py::init<UniformMesh, int>(), py::arg("mesh"), py::arg("order"))
      .def_property_readonly("mesh", &HermiteSpace::mesh)
      .def_property_readonly("order", &HermiteSpace::order)
      .def("dof_count", &HermiteSpace::dof_count)
      .def("local_dof_count", &HermiteSpace::local_dof_count)
      .def("global_index", &HermiteSpace::global_index, py::arg("elem"),
           py::arg("local"))
      .def("shape", &HermiteSpace::shape, py::arg("local"), py::arg("deriv"),
           py::arg("s"))
      .def("evaluate", &HermiteSpace::evaluate, py::arg("coeffs"),
           py::arg("x"), py::arg("deriv"));

  m.def("assemble_schrodinger", &assemble_schrodinger, py::arg("space"),
        py::arg("potential"), py::arg("quadrature"));
  m.def("default_quadrature", &default_quadrature, py::arg("order"));
}
