#pragma once

#include <functional>
#include <string>

#include "sospec/pencil.hpp"
#include "sospec/types.hpp"

namespace sospec {

struct UniformMesh {
  double x_lo = 0.0, x_hi = 1.0;
  int n_elem = 1;

  double h() const { return (x_hi - x_lo) / n_elem; }
  double node(int i) const { return x_lo + i * h(); }
};

// Scalar potential of the operator -u'' + V u with Dirichlet conditions.
struct Potential {
  std::string name;
  std::function<double(double)> f;

  double operator()(double x) const { return f(x); }

  static Potential zero();
  static Potential mathieu();   // 2 cos(2x)
  static Potential crystal();   // cos(x) - exp(-x^2)
  static Potential custom(std::function<double(double)> f);
  static Potential by_name(const std::string& name);
};

// Gauss-Legendre rule on the reference element [0, 1].
struct QuadratureRule {
  RealVector nodes, weights;

  static QuadratureRule gauss_legendre(int n_points);
};

// C1 piecewise-polynomial space of order r in {3, 4, 5} on a uniform mesh,
// with homogeneous Dirichlet conditions at both ends. Local basis per
// element: value and slope at each end node (slope shapes scaled by h so
// coefficients are physical derivatives), then r - 3 interior bubbles.
// Global numbering: nodes left to right with (value, slope) per node,
// endpoints keeping only the slope, then bubbles element by element.
class HermiteSpace {
 public:
  HermiteSpace(UniformMesh mesh, int order);

  const UniformMesh& mesh() const { return mesh_; }
  int order() const { return order_; }
  Index dof_count() const { return dof_count_; }
  int local_dof_count() const { return order_ + 1; }

  // Global index of local dof `local` on element `elem`, or -1 if removed by
  // the Dirichlet condition.
  Index global_index(int elem, int local) const;

  // Physical value (deriv = 0), first or second derivative of local shape
  // `local` at reference coordinate s in [0, 1].
  double shape(int local, int deriv, double s) const;

  // Evaluate the function with the given coefficients at x.
  double evaluate(const RealVector& coeffs, double x, int deriv) const;

 private:
  UniformMesh mesh_;
  int order_ = 3;
  Index dof_count_ = 0;
};

// Pencil of A = -d^2/dx^2 + V on the space: m0 mass, m1 = <A b_k, b_j>,
// m2 = <A b_k, A b_j>, integrated elementwise with the given rule.
PencilTriple assemble_schrodinger(const HermiteSpace& space,
                                  const Potential& potential,
                                  const QuadratureRule& quad);

// Default rule: exact for the polynomial part with margin for the potential.
QuadratureRule default_quadrature(int order);

struct ApproxErrors {
  double l2 = 0.0;  // ||u - f||
  double h1 = 0.0;  // ||u' - f'||
  double h2 = 0.0;  // ||u'' - f''||
};

// Errors of the H2 (Sobolev inner product) projection of f onto the space.
ApproxErrors best_approx_error(const HermiteSpace& space,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               const std::function<double(double)>& d2f,
                               const QuadratureRule& quad);

}  // namespace sospec
