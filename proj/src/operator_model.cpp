#include "sospec/operator_model.hpp"

#include <algorithm>
#include <cmath>

namespace sospec {

DiagonalModel::DiagonalModel(RealVector ambient, Matrix trial)
    : ambient_(std::move(ambient)), trial_(std::move(trial)) {
  if (trial_.rows() != ambient_.size())
    throw PreconditionError("DiagonalModel: trial rows must match ambient size");
  if (trial_.cols() < 1)
    throw PreconditionError("DiagonalModel: empty trial subspace");
}

Complex DiagonalModel::inner(Index i, Index j, int p, int q) const {
  // <A^p b_i, A^q b_j> = sum_e lambda_e^{p+q} V(e,i) conj(V(e,j)).
  Complex s{0.0, 0.0};
  for (Index e = 0; e < ambient_.size(); ++e) {
    double w = 1.0;
    for (int k = 0; k < p + q; ++k) w *= ambient_[e];
    s += w * trial_(e, i) * std::conj(trial_(e, j));
  }
  return s;
}

std::optional<std::vector<RealEigenvalue>> DiagonalModel::exact_spectrum() const {
  std::vector<double> vals(ambient_.begin(), ambient_.end());
  std::sort(vals.begin(), vals.end());
  std::vector<RealEigenvalue> out;
  for (double v : vals) {
    if (!out.empty() && out.back().value == v)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}

DiagonalModel DiagonalModel::with_basis_change(const Matrix& change) const {
  if (change.rows() != trial_.cols() || change.cols() != trial_.cols())
    throw PreconditionError("basis change must be square of trial dimension");
  return DiagonalModel(ambient_, trial_ * change);
}

DiagonalModel DiagonalModel::mobius_mapped(double a, double b, double c,
                                           double d) const {
  if (a * d == c * b)
    throw PreconditionError("mobius map is singular (ad == cb)");
  RealVector mapped(ambient_.size());
  Matrix scaled = trial_;
  for (Index e = 0; e < ambient_.size(); ++e) {
    const double denom = c * ambient_[e] + d;
    const double tol = 1e-14 * std::max({std::abs(c * ambient_[e]), std::abs(d), 1.0});
    if (std::abs(denom) <= tol)
      throw PoleHit("ambient eigenvalue hits the mobius pole");
    mapped[e] = (a * ambient_[e] + b) / denom;
    scaled.row(e) *= denom;
  }
  return DiagonalModel(std::move(mapped), std::move(scaled));
}

MatrixModel::MatrixModel(Matrix a, Matrix trial)
    : a_(std::move(a)), trial_(std::move(trial)) {
  if (a_.rows() != a_.cols())
    throw PreconditionError("MatrixModel: operator must be square");
  if (trial_.rows() != a_.rows())
    throw PreconditionError("MatrixModel: trial rows must match operator size");
  const double asym = (a_ - a_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, a_.cwiseAbs().maxCoeff()))
    throw PreconditionError("MatrixModel: operator is not self-adjoint");
  a_trial_ = a_ * trial_;
}

Complex MatrixModel::inner(Index i, Index j, int p, int q) const {
  const auto& u = (p == 0) ? trial_ : a_trial_;
  const auto& v = (q == 0) ? trial_ : a_trial_;
  // <u_i, v_j> = v_j^H u_i.
  return v.col(j).dot(u.col(i));
}

}  // namespace sospec
