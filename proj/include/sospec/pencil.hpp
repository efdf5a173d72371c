#pragma once

#include "sospec/operator_model.hpp"
#include "sospec/types.hpp"

namespace sospec {

// Matrices of the quadratic pencil q(z) = m2 - 2 z m1 + z^2 m0 over a trial
// basis: m0 = Gram matrix, m1 = <A b_k, b_j>, m2 = <A b_k, A b_j>.
// All three are Hermitian and m0 is positive definite.
struct PencilTriple {
  Matrix m0, m1, m2;

  Index n() const { return m0.rows(); }
  bool is_real() const;

  // q(z) in the trial basis.
  Matrix q(Complex z) const;
};

PencilTriple assemble_pencil(const OperatorModel& model);

// Companion linearization in an orthonormalized basis. cholesky_factor is the
// upper-triangular C with m0 = C^H C; t_mat is the 2n x 2n block matrix
// [[0, I], [-B, 2L]] with B, L the pencil coefficients transported to the
// orthonormal basis.
struct Linearization {
  Matrix t_mat;
  Matrix cholesky_factor;
};

Linearization linearize(const PencilTriple& p);

// The pencil coefficients in the orthonormalized basis: q_hat(z) = b_hat -
// 2 z l_hat + z^2 I. Shared by the spectrum, sigma and nullity computations.
struct OrthonormalPencil {
  Matrix b_hat, l_hat;
  bool real = false;

  Matrix q_hat(Complex z) const;
};

OrthonormalPencil orthonormalize(const PencilTriple& p);

// Eigenvalues of the linearization, clustered into spectral points with
// algebraic multiplicity = cluster size and geometric multiplicity = nullity
// of q_hat at the cluster center. The result is conjugate symmetric: clusters
// are paired across the real axis and near-real centers are snapped to R.
SecondOrderSpectrum second_order_spectrum(const PencilTriple& p,
                                          const ClusterConfig& cfg = {});

// Smallest singular value of q_hat(z); vanishes exactly on the second order
// spectrum and is basis independent.
double sigma(const PencilTriple& p, Complex z);
double sigma(const OrthonormalPencil& on, Complex z);

// Rectangular grid in the complex plane, inclusive of both endpoints.
struct GridSpec {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
  int n_re = 1, n_im = 1;

  double re_at(int col) const;
  double im_at(int row) const;
};

// sigma evaluated at every node; rows ordered by increasing Im, columns by
// increasing Re.
RealMatrix sigma_map(const PencilTriple& p, const GridSpec& grid);

// Eigenvalues of the Galerkin (Rayleigh-Ritz) problem m1 x = lambda m0 x,
// ascending.
std::vector<double> galerkin_spectrum(const PencilTriple& p);

// Image of a spectrum under the real mobius map F(w) = (a w + b)/(c w + d),
// multiplicities unchanged. Throws PoleHit if a point is (numerically) a pole.
SecondOrderSpectrum mobius_image(const SecondOrderSpectrum& s, double a,
                                 double b, double c, double d);

// Pencil of the shift-inverted operator (A - mu)^{-1} over (A - mu)L, formed
// by exact matrix algebra: (m0', m1', m2') = (q(mu), m1 - mu m0, m0).
// Exercises no new quadrature or inner products.
PencilTriple shift_inverted_pencil(const PencilTriple& p, double mu);

// Spectrum computed through the shift-inverted pencil and mapped back with
// z = mu + 1/w. Far more accurate than the direct route when the pencil is
// stiff (eigenvalues of interest become O(1) in the inverted problem).
SecondOrderSpectrum second_order_spectrum_shift_invert(
    const PencilTriple& p, double mu, const ClusterConfig& cfg = {});

}  // namespace sospec
