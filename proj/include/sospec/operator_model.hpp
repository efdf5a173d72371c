#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sospec/types.hpp"

namespace sospec {

// Abstract source of the inner products <A^p b_j, A^q b_k> needed to
// assemble a quadratic pencil over a trial subspace with basis {b_j}.
// Inner products are linear in the first argument, conjugate-linear in the
// second, so inner(i, j, p, q) == conj(inner(j, i, q, p)).
class OperatorModel {
 public:
  virtual ~OperatorModel() = default;

  // Dimension of the trial subspace.
  virtual Index dim() const = 0;

  // <A^p b_i, A^q b_j> with p, q in {0, 1}.
  virtual Complex inner(Index i, Index j, int p, int q) const = 0;

  // Exact spectrum of the operator restricted to the relevant invariant
  // subspace, when the model knows it. Used by tests and enclosure helpers.
  virtual std::optional<std::vector<RealEigenvalue>> exact_spectrum() const {
    return std::nullopt;
  }
};

// Self-adjoint operator given by its eigenvalues on an ambient orthonormal
// eigenbasis, with the trial subspace spanned by the columns of `trial`.
// Row e of `trial` is the coefficient of ambient eigendirection e, whose
// eigenvalue is ambient(e). All toy models reduce to this form.
class DiagonalModel : public OperatorModel {
 public:
  DiagonalModel(RealVector ambient, Matrix trial);

  Index dim() const override { return trial_.cols(); }
  Complex inner(Index i, Index j, int p, int q) const override;
  std::optional<std::vector<RealEigenvalue>> exact_spectrum() const override;

  const RealVector& ambient() const { return ambient_; }
  const Matrix& trial() const { return trial_; }

  // Same subspace expressed in a new basis: columns of `change` give the
  // new basis in terms of the old one.
  DiagonalModel with_basis_change(const Matrix& change) const;

  // Model of F(A) = (a A + b)(c A + d)^{-1} over g(A)L with g(w) = c w + d.
  // Throws PoleHit if an ambient eigenvalue is a pole of F.
  DiagonalModel mobius_mapped(double a, double b, double c, double d) const;

 private:
  RealVector ambient_;
  Matrix trial_;
};

// Dense self-adjoint matrix with the trial subspace spanned by the columns
// of `trial`. Used as an independent oracle for assembly.
class MatrixModel : public OperatorModel {
 public:
  MatrixModel(Matrix a, Matrix trial);

  Index dim() const override { return trial_.cols(); }
  Complex inner(Index i, Index j, int p, int q) const override;

 private:
  Matrix a_;
  Matrix trial_;
  Matrix a_trial_;  // A * trial, cached
};

}  // namespace sospec
