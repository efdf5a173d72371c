#include "sospec/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sospec {

namespace {

// Pencil coefficients transported to the orthonormalized basis, together
// with the Cholesky factor that performed the transport.
struct Transported {
  Matrix b_hat, l_hat, chol_upper;
  bool real = false;
};

// LLT reports success on a singular matrix when roundoff turns a vanishing
// pivot barely positive; certify definiteness through the pivot ratio.
template <typename Mat>
void check_pivots(const Mat& low) {
  const auto d = low.diagonal().cwiseAbs().eval();
  if (d.size() == 0) return;
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0) || d.minCoeff() <= 1e-7 * dmax)
    throw NonPositiveDefiniteMass(
        "mass matrix is numerically singular; trial basis is linearly "
        "dependent");
}

Transported transport(const PencilTriple& p) {
  Transported t;
  t.real = p.is_real();
  if (t.real) {
    const RealMatrix a0 = p.m0.real();
    const RealMatrix a1 = p.m1.real();
    const RealMatrix a2 = p.m2.real();
    Eigen::LLT<RealMatrix> llt(a0);
    if (llt.info() != Eigen::Success)
      throw NonPositiveDefiniteMass(
          "mass matrix is not positive definite; trial basis may be "
          "linearly dependent");
    const RealMatrix low = llt.matrixL();
    check_pivots(low);
    const auto lower = low.triangularView<Eigen::Lower>();
    RealMatrix bh = lower.solve(a2);
    bh = lower.solve(RealMatrix(bh.transpose())).transpose();
    bh = 0.5 * (bh + RealMatrix(bh.transpose()));
    RealMatrix lh = lower.solve(a1);
    lh = lower.solve(RealMatrix(lh.transpose())).transpose();
    lh = 0.5 * (lh + RealMatrix(lh.transpose()));
    t.b_hat = bh.cast<Complex>();
    t.l_hat = lh.cast<Complex>();
    t.chol_upper = RealMatrix(low.transpose()).cast<Complex>();
    return t;
  }
  Eigen::LLT<Matrix> llt(p.m0);
  if (llt.info() != Eigen::Success)
    throw NonPositiveDefiniteMass(
        "mass matrix is not positive definite; trial basis may be "
        "linearly dependent");
  const Matrix low = llt.matrixL();
  check_pivots(low);
  const auto lower = low.triangularView<Eigen::Lower>();
  Matrix bh = lower.solve(p.m2);
  bh = lower.solve(Matrix(bh.adjoint())).adjoint();
  bh = 0.5 * (bh + Matrix(bh.adjoint()));
  Matrix lh = lower.solve(p.m1);
  lh = lower.solve(Matrix(lh.adjoint())).adjoint();
  lh = 0.5 * (lh + Matrix(lh.adjoint()));
  t.b_hat = std::move(bh);
  t.l_hat = std::move(lh);
  t.chol_upper = low.adjoint();
  return t;
}

Matrix companion(const Matrix& b_hat, const Matrix& l_hat) {
  const Index n = b_hat.rows();
  Matrix t = Matrix::Zero(2 * n, 2 * n);
  t.block(0, n, n, n) = Matrix::Identity(n, n);
  t.block(n, 0, n, n) = -b_hat;
  t.block(n, n, n, n) = 2.0 * l_hat;
  return t;
}

Vector companion_eigenvalues(const Transported& t) {
  if (t.real) {
    const Index n = t.b_hat.rows();
    RealMatrix c = RealMatrix::Zero(2 * n, 2 * n);
    c.block(0, n, n, n) = RealMatrix::Identity(n, n);
    c.block(n, 0, n, n) = -t.b_hat.real();
    c.block(n, n, n, n) = 2.0 * t.l_hat.real();
    Eigen::EigenSolver<RealMatrix> es(c, false);
    if (es.info() != Eigen::Success)
      throw EigensolverFailure("companion eigensolver did not converge");
    return es.eigenvalues();
  }
  Eigen::ComplexEigenSolver<Matrix> es(companion(t.b_hat, t.l_hat), false);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("companion eigensolver did not converge");
  return es.eigenvalues();
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

struct Cluster {
  Complex center{};
  int alg = 0;
  int geom = 1;
};

std::vector<Cluster> agglomerate(const std::vector<Complex>& pts,
                                 const std::vector<int>& weights,
                                 double width) {
  const int n = static_cast<int>(pts.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= width) uf.unite(i, j);
  std::vector<int> root_index(n, -1);
  std::vector<Cluster> out;
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_index[r] < 0) {
      root_index[r] = static_cast<int>(out.size());
      out.push_back({});
    }
    Cluster& c = out[root_index[r]];
    c.center += static_cast<double>(weights[i]) * pts[i];
    c.alg += weights[i];
  }
  for (auto& c : out) c.center /= static_cast<double>(c.alg);
  return out;
}

// Pair clusters across the real axis and make the symmetry exact. Near-real
// centers (within snap_tol) are snapped onto R first. Conjugate partners end
// up with identical multiplicities and exactly conjugate centers.
void symmetrize_conjugates(std::vector<Cluster>& clusters, double snap_tol) {
  for (auto& c : clusters)
    if (std::abs(c.center.imag()) <= snap_tol)
      c.center = Complex(c.center.real(), 0.0);

  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(clusters.size()); ++i) {
    if (clusters[i].center.imag() > 0.0) pos.push_back(i);
    if (clusters[i].center.imag() < 0.0) neg.push_back(i);
  }
  std::vector<bool> used(clusters.size(), false);
  std::vector<Cluster> merged_real;
  for (int ip : pos) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int in : neg) {
      if (used[in]) continue;
      const double d = std::abs(std::conj(clusters[in].center) - clusters[ip].center);
      if (d < best_d) {
        best_d = d;
        best = in;
      }
    }
    if (best < 0) {
      // No partner at all: collapse onto the real axis to preserve symmetry.
      clusters[ip].center = Complex(clusters[ip].center.real(), 0.0);
      continue;
    }
    used[best] = true;
    Cluster& cp = clusters[ip];
    Cluster& cn = clusters[best];
    const Complex avg = 0.5 * (cp.center + std::conj(cn.center));
    if (cp.alg == cn.alg) {
      cp.center = avg;
      cn.center = std::conj(avg);
    } else if ((cp.alg + cn.alg) % 2 == 0) {
      cp.center = avg;
      cn.center = std::conj(avg);
      cp.alg = cn.alg = (cp.alg + cn.alg) / 2;
    } else {
      // Odd combined count means a real eigenvalue leaked into the pair;
      // merge everything into one real cluster.
      Cluster m;
      m.center = Complex(avg.real(), 0.0);
      m.alg = cp.alg + cn.alg;
      cp.alg = cn.alg = 0;
      merged_real.push_back(m);
    }
  }
  for (int in : neg)
    if (!used[in] && clusters[in].alg > 0)
      clusters[in].center = Complex(clusters[in].center.real(), 0.0);
  clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                [](const Cluster& c) { return c.alg == 0; }),
                 clusters.end());
  clusters.insert(clusters.end(), merged_real.begin(), merged_real.end());
}

int nullity(const Matrix& m, double rank_tol) {
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double top = sv(0);
  if (top == 0.0) return static_cast<int>(sv.size());
  int count = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= rank_tol * top) ++count;
  return count;
}

}  // namespace

bool PencilTriple::is_real() const {
  auto real_part = [](const Matrix& m) {
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
  };
  return real_part(m0) && real_part(m1) && real_part(m2);
}

Matrix PencilTriple::q(Complex z) const {
  return m2 - 2.0 * z * m1 + (z * z) * m0;
}

PencilTriple assemble_pencil(const OperatorModel& model) {
  const Index n = model.dim();
  if (n < 1) throw PreconditionError("assemble_pencil: empty model");
  PencilTriple p;
  p.m0.resize(n, n);
  p.m1.resize(n, n);
  p.m2.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      p.m0(j, k) = model.inner(k, j, 0, 0);
      p.m1(j, k) = model.inner(k, j, 1, 0);
      p.m2(j, k) = model.inner(k, j, 1, 1);
    }
  }
  // The model's inner products are Hermitian up to roundoff; make it exact.
  p.m0 = 0.5 * (p.m0 + Matrix(p.m0.adjoint())).eval();
  p.m1 = 0.5 * (p.m1 + Matrix(p.m1.adjoint())).eval();
  p.m2 = 0.5 * (p.m2 + Matrix(p.m2.adjoint())).eval();
  Eigen::LLT<Matrix> llt(p.m0);
  if (llt.info() != Eigen::Success)
    throw NonPositiveDefiniteMass(
        "mass matrix is not positive definite; trial basis may be "
        "linearly dependent");
  check_pivots(Matrix(llt.matrixL()));
  return p;
}

Linearization linearize(const PencilTriple& p) {
  Transported t = transport(p);
  Linearization lin;
  lin.t_mat = companion(t.b_hat, t.l_hat);
  lin.cholesky_factor = std::move(t.chol_upper);
  return lin;
}

Matrix OrthonormalPencil::q_hat(Complex z) const {
  const Index n = b_hat.rows();
  return b_hat - 2.0 * z * l_hat + (z * z) * Matrix::Identity(n, n);
}

OrthonormalPencil orthonormalize(const PencilTriple& p) {
  Transported t = transport(p);
  OrthonormalPencil on;
  on.b_hat = std::move(t.b_hat);
  on.l_hat = std::move(t.l_hat);
  on.real = t.real;
  return on;
}

SecondOrderSpectrum second_order_spectrum(const PencilTriple& p,
                                          const ClusterConfig& cfg) {
  const Transported t = transport(p);
  const Vector eigs = companion_eigenvalues(t);

  double scale = 0.0;
  for (Index i = 0; i < eigs.size(); ++i)
    scale = std::max(scale, std::abs(eigs(i)));
  const double width = cfg.rel_tol * scale + cfg.abs_floor;

  std::vector<Complex> pts(eigs.begin(), eigs.end());
  std::vector<int> unit(pts.size(), 1);
  std::vector<Cluster> clusters = agglomerate(pts, unit, width);

  double effective = width;
  if (cfg.defect_rel_tol > 0.0) {
    // Second stage: defective real points scatter far beyond the base width;
    // re-cluster near-real centers with the coarser defect width.
    const double dw = cfg.defect_rel_tol * scale + cfg.abs_floor;
    effective = std::max(effective, dw);
    std::vector<Complex> centers;
    std::vector<int> weights;
    std::vector<Cluster> passthrough;
    for (const auto& c : clusters) {
      if (std::abs(c.center.imag()) <= dw) {
        centers.push_back(c.center);
        weights.push_back(c.alg);
      } else {
        passthrough.push_back(c);
      }
    }
    if (!centers.empty()) {
      std::vector<Cluster> merged = agglomerate(centers, weights, dw);
      for (auto& c : merged) c.center = Complex(c.center.real(), 0.0);
      clusters = std::move(passthrough);
      clusters.insert(clusters.end(), merged.begin(), merged.end());
    }
  }

  symmetrize_conjugates(clusters, width);

  OrthonormalPencil on;
  on.b_hat = t.b_hat;
  on.l_hat = t.l_hat;
  on.real = t.real;
  const Index n = p.n();
  // Geometric multiplicity: algebraically simple points are geometrically
  // simple; only multiple clusters need a rank decision. Conjugate partners
  // share their nullity (q_hat(conj z) = q_hat(z)^H).
  std::vector<std::pair<Complex, int>> computed;
  for (auto& c : clusters) {
    if (c.alg <= 1) {
      c.geom = 1;
      continue;
    }
    if (c.center.imag() < 0.0) continue;
    int g = nullity(on.q_hat(c.center), cfg.rank_tol);
    g = std::clamp(g, 1, std::min<int>(c.alg, static_cast<int>(n)));
    c.geom = g;
    if (c.center.imag() > 0.0) computed.emplace_back(c.center, g);
  }
  for (auto& c : clusters) {
    if (c.alg <= 1 || c.center.imag() >= 0.0) continue;
    const Complex partner = std::conj(c.center);
    bool found = false;
    for (const auto& [z, g] : computed)
      if (z == partner) {
        c.geom = g;
        found = true;
        break;
      }
    if (!found) {
      int g = nullity(on.q_hat(c.center), cfg.rank_tol);
      c.geom = std::clamp(g, 1, std::min<int>(c.alg, static_cast<int>(n)));
    }
  }

  SecondOrderSpectrum out;
  out.cluster_tol = effective;
  out.scale = scale;
  for (const auto& c : clusters)
    out.points.push_back({c.center, c.alg, c.geom});
  std::sort(out.points.begin(), out.points.end(), spectral_point_less);
  return out;
}

double sigma(const OrthonormalPencil& on, Complex z) {
  Eigen::BDCSVD<Matrix> svd(on.q_hat(z));
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

double sigma(const PencilTriple& p, Complex z) {
  return sigma(orthonormalize(p), z);
}

double GridSpec::re_at(int col) const {
  if (n_re <= 1) return re_lo;
  return re_lo + (re_hi - re_lo) * static_cast<double>(col) / (n_re - 1);
}

double GridSpec::im_at(int row) const {
  if (n_im <= 1) return im_lo;
  return im_lo + (im_hi - im_lo) * static_cast<double>(row) / (n_im - 1);
}

RealMatrix sigma_map(const PencilTriple& p, const GridSpec& grid) {
  if (grid.n_re < 1 || grid.n_im < 1)
    throw PreconditionError("sigma_map: grid must have at least one node");
  const OrthonormalPencil on = orthonormalize(p);
  RealMatrix out(grid.n_im, grid.n_re);
  for (int r = 0; r < grid.n_im; ++r)
    for (int c = 0; c < grid.n_re; ++c)
      out(r, c) = sigma(on, Complex(grid.re_at(c), grid.im_at(r)));
  return out;
}

std::vector<double> galerkin_spectrum(const PencilTriple& p) {
  std::vector<double> out;
  if (p.is_real()) {
    Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> es(
        p.m1.real(), p.m0.real(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
      throw EigensolverFailure("galerkin eigensolver did not converge");
    const auto& v = es.eigenvalues();
    out.assign(v.begin(), v.end());
  } else {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(
        p.m1, p.m0, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
      throw EigensolverFailure("galerkin eigensolver did not converge");
    const auto& v = es.eigenvalues();
    out.assign(v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SecondOrderSpectrum mobius_image(const SecondOrderSpectrum& s, double a,
                                 double b, double c, double d) {
  if (a * d == c * b)
    throw PreconditionError("mobius map is singular (ad == cb)");
  SecondOrderSpectrum out;
  out.cluster_tol = s.cluster_tol;
  for (const auto& pt : s.points) {
    const Complex denom = c * pt.value + d;
    const double tol =
        1e-14 * std::max({std::abs(c * pt.value), std::abs(d), 1.0});
    if (std::abs(denom) <= tol)
      throw PoleHit("spectral point hits the mobius pole");
    SpectralPoint mapped = pt;
    mapped.value = (a * pt.value + b) / denom;
    out.points.push_back(mapped);
    out.scale = std::max(out.scale, std::abs(mapped.value));
  }
  std::sort(out.points.begin(), out.points.end(), spectral_point_less);
  return out;
}

PencilTriple shift_inverted_pencil(const PencilTriple& p, double mu) {
  PencilTriple out;
  out.m0 = p.q(Complex(mu, 0.0));
  out.m1 = p.m1 - mu * p.m0;
  out.m2 = p.m0;
  return out;
}

SecondOrderSpectrum second_order_spectrum_shift_invert(
    const PencilTriple& p, double mu, const ClusterConfig& cfg) {
  const SecondOrderSpectrum inv =
      second_order_spectrum(shift_inverted_pencil(p, mu), cfg);
  SecondOrderSpectrum out;
  out.cluster_tol = inv.cluster_tol;
  // Map back z = mu + 1/w, conjugate pairs regenerated from the upper half
  // plane so the symmetry survives floating point division.
  for (const auto& pt : inv.points) {
    if (pt.value.imag() < 0.0) continue;
    if (std::abs(pt.value) == 0.0)
      throw PoleHit("shift-inverted spectrum touches zero");
    SpectralPoint mapped = pt;
    mapped.value = mu + 1.0 / pt.value;
    if (pt.value.imag() == 0.0) {
      mapped.value = Complex(mapped.value.real(), 0.0);
      out.points.push_back(mapped);
    } else {
      out.points.push_back(mapped);
      mapped.value = std::conj(mapped.value);
      out.points.push_back(mapped);
    }
  }
  for (const auto& pt : out.points)
    out.scale = std::max(out.scale, std::abs(pt.value));
  std::sort(out.points.begin(), out.points.end(), spectral_point_less);
  return out;
}

}  // namespace sospec
