#include "sospec/fem.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace sospec {

Potential Potential::zero() {
  return {"zero", [](double) { return 0.0; }};
}

Potential Potential::mathieu() {
  return {"mathieu", [](double x) { return 2.0 * std::cos(2.0 * x); }};
}

Potential Potential::crystal() {
  return {"crystal", [](double x) { return std::cos(x) - std::exp(-x * x); }};
}

Potential Potential::custom(std::function<double(double)> f) {
  return {"custom", std::move(f)};
}

Potential Potential::by_name(const std::string& name) {
  if (name == "zero") return zero();
  if (name == "mathieu") return mathieu();
  if (name == "crystal") return crystal();
  throw PreconditionError("unknown potential: " + name);
}

QuadratureRule QuadratureRule::gauss_legendre(int n_points) {
  if (n_points < 1)
    throw PreconditionError("gauss_legendre: need at least one point");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come
  // from the first eigenvector components.
  RealMatrix jac = RealMatrix::Zero(n_points, n_points);
  for (int k = 1; k < n_points; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(jac);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("gauss_legendre: Jacobi eigensolve failed");
  QuadratureRule rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    // Map from [-1, 1] to [0, 1].
    rule.nodes[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;  // 2 * v0^2, halved by the interval map
  }
  return rule;
}

QuadratureRule default_quadrature(int order) {
  return QuadratureRule::gauss_legendre(std::max(order + 3, 12));
}

namespace {

// Reference shapes on [0, 1]; rows: value(0), slope(0), value(1), slope(1).
// Bubbles are s^2 (1-s)^2 s^m.
double hermite_shape(int local, int deriv, double s) {
  switch (local) {
    case 0:  // 1 - 3s^2 + 2s^3
      if (deriv == 0) return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
      if (deriv == 1) return -6.0 * s + 6.0 * s * s;
      return -6.0 + 12.0 * s;
    case 1:  // s - 2s^2 + s^3
      if (deriv == 0) return s - 2.0 * s * s + s * s * s;
      if (deriv == 1) return 1.0 - 4.0 * s + 3.0 * s * s;
      return -4.0 + 6.0 * s;
    case 2:  // 3s^2 - 2s^3
      if (deriv == 0) return 3.0 * s * s - 2.0 * s * s * s;
      if (deriv == 1) return 6.0 * s - 6.0 * s * s;
      return 6.0 - 12.0 * s;
    case 3:  // s^3 - s^2
      if (deriv == 0) return s * s * s - s * s;
      if (deriv == 1) return 3.0 * s * s - 2.0 * s;
      return 6.0 * s - 2.0;
    default: {
      const int m = local - 4;  // bubble: s^{m+2} - 2 s^{m+3} + s^{m+4}
      auto mono = [s](int p, int deriv) {
        double c = 1.0;
        for (int d = 0; d < deriv; ++d) c *= (p - d);
        if (p - deriv < 0) return 0.0;
        return c * std::pow(s, p - deriv);
      };
      return mono(m + 2, deriv) - 2.0 * mono(m + 3, deriv) + mono(m + 4, deriv);
    }
  }
}

}  // namespace

HermiteSpace::HermiteSpace(UniformMesh mesh, int order)
    : mesh_(mesh), order_(order) {
  if (order < 3 || order > 5)
    throw UnsupportedOrder("HermiteSpace: order must be 3, 4 or 5");
  if (mesh.n_elem < 1)
    throw PreconditionError("HermiteSpace: mesh needs at least one element");
  if (!(mesh.x_hi > mesh.x_lo))
    throw PreconditionError("HermiteSpace: empty interval");
  dof_count_ = static_cast<Index>(order_ - 1) * mesh_.n_elem;
}

Index HermiteSpace::global_index(int elem, int local) const {
  const int last = mesh_.n_elem - 1;
  const Index nodal = 2 * static_cast<Index>(mesh_.n_elem);
  switch (local) {
    case 0:  // value at left node
      return elem == 0 ? -1 : 2 * elem - 1;
    case 1:  // slope at left node
      return elem == 0 ? 0 : 2 * elem;
    case 2:  // value at right node
      return elem == last ? -1 : 2 * (elem + 1) - 1;
    case 3:  // slope at right node
      return elem == last ? nodal - 1 : 2 * (elem + 1);
    default:  // bubbles
      return nodal + static_cast<Index>(elem) * (order_ - 3) + (local - 4);
  }
}

double HermiteSpace::shape(int local, int deriv, double s) const {
  if (local < 0 || local >= local_dof_count())
    throw PreconditionError("HermiteSpace::shape: bad local index");
  const double h = mesh_.h();
  const double ref = hermite_shape(local, deriv, s);
  double scale = 1.0;
  for (int d = 0; d < deriv; ++d) scale /= h;
  if (local == 1 || local == 3) scale *= h;  // slope dofs carry h
  return ref * scale;
}

double HermiteSpace::evaluate(const RealVector& coeffs, double x,
                              int deriv) const {
  if (coeffs.size() != dof_count_)
    throw PreconditionError("HermiteSpace::evaluate: coefficient size mismatch");
  const double h = mesh_.h();
  int e = static_cast<int>(std::floor((x - mesh_.x_lo) / h));
  e = std::max(0, std::min(e, mesh_.n_elem - 1));
  const double s = (x - mesh_.node(e)) / h;
  double out = 0.0;
  for (int l = 0; l < local_dof_count(); ++l) {
    const Index g = global_index(e, l);
    if (g < 0) continue;
    out += coeffs[g] * shape(l, deriv, s);
  }
  return out;
}

PencilTriple assemble_schrodinger(const HermiteSpace& space,
                                  const Potential& potential,
                                  const QuadratureRule& quad) {
  const Index n = space.dof_count();
  const int nl = space.local_dof_count();
  const int nq = static_cast<int>(quad.nodes.size());
  const double h = space.mesh().h();

  RealMatrix a0 = RealMatrix::Zero(n, n);
  RealMatrix a1 = RealMatrix::Zero(n, n);
  RealMatrix a2 = RealMatrix::Zero(n, n);

  std::vector<double> val(nl), act(nl);
  for (int e = 0; e < space.mesh().n_elem; ++e) {
    const double x0 = space.mesh().node(e);
    for (int q = 0; q < nq; ++q) {
      const double s = quad.nodes[q];
      const double w = quad.weights[q] * h;
      const double vx = potential(x0 + s * h);
      for (int l = 0; l < nl; ++l) {
        val[l] = space.shape(l, 0, s);
        act[l] = -space.shape(l, 2, s) + vx * val[l];
      }
      for (int j = 0; j < nl; ++j) {
        const Index gj = space.global_index(e, j);
        if (gj < 0) continue;
        for (int k = 0; k < nl; ++k) {
          const Index gk = space.global_index(e, k);
          if (gk < 0) continue;
          a0(gj, gk) += w * val[k] * val[j];
          a1(gj, gk) += w * act[k] * val[j];
          a2(gj, gk) += w * act[k] * act[j];
        }
      }
    }
  }
  // The elementwise action integrals are asymmetric (boundary terms cancel
  // only in the total sum); symmetrize exactly.
  a1 = (0.5 * (a1 + a1.transpose())).eval();
  a0 = (0.5 * (a0 + a0.transpose())).eval();
  a2 = (0.5 * (a2 + a2.transpose())).eval();

  PencilTriple p;
  p.m0 = a0.cast<Complex>();
  p.m1 = a1.cast<Complex>();
  p.m2 = a2.cast<Complex>();
  return p;
}

ApproxErrors best_approx_error(const HermiteSpace& space,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               const std::function<double(double)>& d2f,
                               const QuadratureRule& quad) {
  const Index n = space.dof_count();
  const int nl = space.local_dof_count();
  const int nq = static_cast<int>(quad.nodes.size());
  const double h = space.mesh().h();

  RealMatrix gram = RealMatrix::Zero(n, n);
  RealVector rhs = RealVector::Zero(n);
  std::vector<double> v0(nl), v1(nl), v2(nl);
  for (int e = 0; e < space.mesh().n_elem; ++e) {
    const double x0 = space.mesh().node(e);
    for (int q = 0; q < nq; ++q) {
      const double s = quad.nodes[q];
      const double w = quad.weights[q] * h;
      const double x = x0 + s * h;
      const double fx = f(x), dfx = df(x), d2fx = d2f(x);
      for (int l = 0; l < nl; ++l) {
        v0[l] = space.shape(l, 0, s);
        v1[l] = space.shape(l, 1, s);
        v2[l] = space.shape(l, 2, s);
      }
      for (int j = 0; j < nl; ++j) {
        const Index gj = space.global_index(e, j);
        if (gj < 0) continue;
        rhs[gj] += w * (fx * v0[j] + dfx * v1[j] + d2fx * v2[j]);
        for (int k = 0; k < nl; ++k) {
          const Index gk = space.global_index(e, k);
          if (gk < 0) continue;
          gram(gj, gk) += w * (v0[k] * v0[j] + v1[k] * v1[j] + v2[k] * v2[j]);
        }
      }
    }
  }
  Eigen::LDLT<RealMatrix> ldlt(0.5 * (gram + RealMatrix(gram.transpose())));
  if (ldlt.info() != Eigen::Success)
    throw SolverError("best_approx_error: Gram factorization failed");
  const RealVector coeffs = ldlt.solve(rhs);

  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  for (int e = 0; e < space.mesh().n_elem; ++e) {
    const double x0 = space.mesh().node(e);
    for (int q = 0; q < nq; ++q) {
      const double s = quad.nodes[q];
      const double w = quad.weights[q] * h;
      const double x = x0 + s * h;
      double u0 = 0.0, u1 = 0.0, u2 = 0.0;
      for (int l = 0; l < nl; ++l) {
        const Index g = space.global_index(e, l);
        if (g < 0) continue;
        u0 += coeffs[g] * space.shape(l, 0, s);
        u1 += coeffs[g] * space.shape(l, 1, s);
        u2 += coeffs[g] * space.shape(l, 2, s);
      }
      e0 += w * (u0 - f(x)) * (u0 - f(x));
      e1 += w * (u1 - df(x)) * (u1 - df(x));
      e2 += w * (u2 - d2f(x)) * (u2 - d2f(x));
    }
  }
  return {std::sqrt(e0), std::sqrt(e1), std::sqrt(e2)};
}

}  // namespace sospec
