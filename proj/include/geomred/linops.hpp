#pragma once

#include "geomred/core.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

namespace geomred::linops {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RealOf = typename Eigen::NumTraits<S>::Real;

// Spectral norm; zero for empty matrices.
template <class Derived>
auto opnorm(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  using R = RealOf<S>;
  if (a.size() == 0) return R(0);
  MatX<S> m = a;
  Eigen::JacobiSVD<MatX<S>> svd(m);
  return svd.singularValues()(0);
}

// T = P · diag(0, core) · Q with P = [coker, im] and Q = [ker, coim]ᴴ.
template <class S>
struct RankFactorization {
  MatX<S> P, core, Q;
  MatX<S> ker_basis, coim_basis, coker_basis, im_basis;
  Eigen::Index rank = 0;
  RealOf<S> sigma_max = 0;
  RealOf<S> core_condition = 1;

  Eigen::Index rows() const { return P.rows(); }
  Eigen::Index cols() const { return Q.cols(); }

  MatX<S> pr_ker() const { return ker_basis * ker_basis.adjoint(); }
  MatX<S> pr_coim() const { return coim_basis * coim_basis.adjoint(); }
  MatX<S> pr_im() const { return im_basis * im_basis.adjoint(); }
  MatX<S> pr_coker() const { return coker_basis * coker_basis.adjoint(); }

  MatX<S> middle() const {
    MatX<S> d = MatX<S>::Zero(rows(), cols());
    d.bottomRightCorner(rank, rank) = core;
    return d;
  }
  MatX<S> reconstruct() const { return P * middle() * Q; }
};

template <class Derived>
RankFactorization<typename Derived::Scalar> rank_factorize(
    const Eigen::MatrixBase<Derived>& T_in, const TolerancePolicy& tol = {}) {
  using S = typename Derived::Scalar;
  using R = RealOf<S>;
  require_finite(T_in, "matrix");
  const MatX<S> T = T_in;
  const Eigen::Index m = T.rows(), n = T.cols();
  RankFactorization<S> f;

  MatX<S> U = MatX<S>::Identity(m, m), V = MatX<S>::Identity(n, n);
  VecX<R> sv(0);
  if (m > 0 && n > 0) {
    Eigen::JacobiSVD<MatX<S>> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    U = svd.matrixU();
    V = svd.matrixV();
    sv = svd.singularValues();
  }
  f.sigma_max = sv.size() ? sv(0) : R(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > R(tol.rank_tol) * f.sigma_max) ++r;
  f.rank = r;

  f.im_basis = U.leftCols(r);
  f.coker_basis = U.rightCols(m - r);
  f.coim_basis = V.leftCols(r);
  f.ker_basis = V.rightCols(n - r);

  f.P.resize(m, m);
  f.P << f.coker_basis, f.im_basis;
  MatX<S> Qt(n, n);
  Qt << f.ker_basis, f.coim_basis;
  f.Q = Qt.adjoint();
  f.core = f.im_basis.adjoint() * T * f.coim_basis;
  f.core_condition = r ? sv(0) / sv(r - 1) : R(1);
  return f;
}

template <class S>
struct GenInverse {
  MatX<S> S_mat;
  bool reflexive = false;
  RealOf<S> tst_residual = 0;  // ‖TST − T‖ / ‖T‖
  RealOf<S> sts_residual = 0;  // ‖STS − S‖ / ‖S‖
};

template <class S>
MatX<S> generalized_inverse_from(const RankFactorization<S>& f) {
  if (f.rank == 0) return MatX<S>::Zero(f.cols(), f.rows());
  MatX<S> core_inv = f.core.fullPivLu().inverse();
  return f.coim_basis * core_inv * f.im_basis.adjoint();
}

namespace detail {
template <class S>
RealOf<S> rel(const MatX<S>& diff, const MatX<S>& ref) {
  const RealOf<S> d = opnorm(diff), r = opnorm(ref);
  return r > 0 ? d / r : d;
}
}  // namespace detail

template <class Derived>
GenInverse<typename Derived::Scalar> generalized_inverse(const Eigen::MatrixBase<Derived>& T_in,
                                                         const TolerancePolicy& tol = {}) {
  using S = typename Derived::Scalar;
  const MatX<S> T = T_in;
  auto f = rank_factorize(T, tol);
  GenInverse<S> g;
  g.S_mat = generalized_inverse_from(f);
  g.tst_residual = detail::rel<S>(T * g.S_mat * T - T, T);
  g.sts_residual = detail::rel<S>(g.S_mat * T * g.S_mat - g.S_mat, g.S_mat);
  g.reflexive = g.sts_residual <= tol.residual_tol;
  return g;
}

template <class S>
struct ExtendedBlock {
  MatX<S> T_plus;    // Coker → Y, the injection
  MatX<S> T_minus;   // X → Ker, the orthogonal projection
  MatX<S> T_pm;      // Coker → Ker block, zero by default
  MatX<S> extended;  // [[T, T⁺], [T⁻, T⁺⁻]]
  MatX<S> extended_inverse;
  MatX<S> S_mat, S_minus, S_plus, S_pm;  // inverse blocks
  RealOf<S> lower_right_norm = 0;
};

template <class S>
ExtendedBlock<S> extend_block_with(const MatX<S>& T, const RankFactorization<S>& f,
                                   const MatX<S>& T_pm, const TolerancePolicy& tol = {}) {
  const Eigen::Index m = T.rows(), n = T.cols();
  const Eigen::Index kp = f.coker_basis.cols(), km = f.ker_basis.cols();
  if (T_pm.rows() != km || T_pm.cols() != kp)
    throw Error(ErrorCode::ShapeMismatch, "T+- block must be dim Ker x dim Coker");
  ExtendedBlock<S> e;
  e.T_plus = f.coker_basis;
  e.T_minus = f.ker_basis.adjoint();
  e.T_pm = T_pm;
  const Eigen::Index N = m + km;
  e.extended.resize(N, n + kp);
  e.extended << T, e.T_plus, e.T_minus, T_pm;
  if (N == 0) {
    e.extended_inverse.resize(0, 0);
  } else {
    Eigen::FullPivLU<MatX<S>> lu(e.extended);
    lu.setThreshold(RealOf<S>(tol.rank_tol));
    if (!lu.isInvertible())
      throw Error(ErrorCode::SingularExtension, "extended block matrix is singular");
    e.extended_inverse = lu.inverse();
  }
  e.S_mat = e.extended_inverse.topLeftCorner(n, m);
  e.S_minus = e.extended_inverse.topRightCorner(n, km);
  e.S_plus = e.extended_inverse.bottomLeftCorner(kp, m);
  e.S_pm = e.extended_inverse.bottomRightCorner(kp, km);
  e.lower_right_norm = opnorm(e.S_pm);
  return e;
}

template <class Derived>
ExtendedBlock<typename Derived::Scalar> extend_block(const Eigen::MatrixBase<Derived>& T_in,
                                                     const TolerancePolicy& tol = {}) {
  using S = typename Derived::Scalar;
  const MatX<S> T = T_in;
  auto f = rank_factorize(T, tol);
  MatX<S> zero = MatX<S>::Zero(f.ker_basis.cols(), f.coker_basis.cols());
  return extend_block_with<S>(T, f, zero, tol);
}

// B11 − B12·B22⁻¹·B21 for B split after row/column `split`.
template <class Derived>
MatX<typename Derived::Scalar> schur_recover(const Eigen::MatrixBase<Derived>& B_in,
                                             Eigen::Index split,
                                             const TolerancePolicy& tol = {}) {
  using S = typename Derived::Scalar;
  const MatX<S> B = B_in;
  if (B.rows() != B.cols() || split < 0 || split > B.rows())
    throw Error(ErrorCode::ShapeMismatch, "schur_recover needs a square matrix and split <= size");
  const Eigen::Index k = B.rows() - split;
  if (k == 0) return B;
  const MatX<S> B22 = B.bottomRightCorner(k, k);
  Eigen::JacobiSVD<MatX<S>> svd(B22);
  const auto sv = svd.singularValues();
  if (sv(k - 1) == 0 || sv(0) / sv(k - 1) > 1 / RealOf<S>(tol.rank_tol))
    throw Error(ErrorCode::SingularB22, "B22 is numerically singular");
  return B.topLeftCorner(split, split) -
         B.topRightCorner(split, k) * B22.fullPivLu().solve(B.bottomLeftCorner(k, split));
}

template <class Derived>
long fredholm_index(const Eigen::MatrixBase<Derived>& T, const TolerancePolicy& tol = {}) {
  auto f = rank_factorize(T, tol);
  return static_cast<long>(f.ker_basis.cols()) - static_cast<long>(f.coker_basis.cols());
}

// Orthonormal basis of the column space.
template <class Derived>
MatX<typename Derived::Scalar> orth(const Eigen::MatrixBase<Derived>& A, double rank_tol = 1e-10) {
  TolerancePolicy t;
  t.rank_tol = rank_tol;
  return rank_factorize(A, t).im_basis;
}

// Orthonormal basis of the null space.
template <class Derived>
MatX<typename Derived::Scalar> null_space(const Eigen::MatrixBase<Derived>& A,
                                          double rank_tol = 1e-10) {
  TolerancePolicy t;
  t.rank_tol = rank_tol;
  return rank_factorize(A, t).ker_basis;
}

// Orthogonal complement of span(A) in the ambient space of dimension A.rows().
template <class Derived>
MatX<typename Derived::Scalar> orth_complement(const Eigen::MatrixBase<Derived>& A,
                                               double rank_tol = 1e-10) {
  using S = typename Derived::Scalar;
  if (A.cols() == 0) return MatX<S>::Identity(A.rows(), A.rows());
  return null_space(MatX<S>(A.adjoint()), rank_tol);
}

// sin of the largest principal angle of span(A) against span(B); zero iff A ⊆ B.
template <class DA, class DB>
auto containment_defect(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  using S = typename DA::Scalar;
  using R = RealOf<S>;
  if (A.cols() == 0) return R(0);
  MatX<S> a = orth(A);
  if (a.cols() == 0) return R(0);
  if (B.cols() == 0) return R(1);
  MatX<S> b = orth(B);
  if (b.cols() == 0) return R(1);
  return opnorm(MatX<S>(a - b * (b.adjoint() * a)));
}

// Largest principal angle distance; 1 when dimensions differ.
template <class DA, class DB>
auto subspace_distance(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B,
                       double rank_tol = 1e-10) {
  using S = typename DA::Scalar;
  using R = RealOf<S>;
  MatX<S> a = orth(A, rank_tol), b = orth(B, rank_tol);
  if (a.cols() != b.cols()) return R(1);
  return std::max(containment_defect(a, b), containment_defect(b, a));
}

// Orthonormal basis of span(A) ∩ span(B).
template <class DA, class DB>
MatX<typename DA::Scalar> intersect(const Eigen::MatrixBase<DA>& A,
                                    const Eigen::MatrixBase<DB>& B, double rank_tol = 1e-10) {
  using S = typename DA::Scalar;
  MatX<S> a = orth(A, rank_tol), b = orth(B, rank_tol);
  if (a.cols() == 0 || b.cols() == 0) return MatX<S>(A.rows(), 0);
  MatX<S> ab(a.rows(), a.cols() + b.cols());
  ab << a, -b;
  MatX<S> k = null_space(ab, rank_tol);
  return orth(MatX<S>(a * k.topRows(a.cols())), rank_tol);
}

// ---------------------------------------------------------------------------
// Operator families

struct OperatorFamily {
  int param_dim = 1;
  std::function<Mat(const Vec&)> eval;
  Vec base;
  std::vector<Vec> grid;
};

struct RegularityPoint {
  Vec param;
  bool tilde_invertible = true;
  double core_condition = 1;  // condition number of T̃_p, +inf when singular
  bool ker_contained = true;  // Ker T_p ⊆ Ker T₀
  bool im_contains = true;    // Im T_p ⊇ Im T₀
  double ker_angle = 0;
  double im_angle = 0;
  Mat tilde_kernel;  // kernel of T̃_p, as vectors of the domain
  double kernel_residual = 0;
};

struct RegularityReport {
  std::vector<RegularityPoint> points;
  bool uniformly_regular = true;
  bool semicontinuous = true;
  long base_rank = 0;
};

RegularityReport family_uniform_regular(const OperatorFamily& F, const TolerancePolicy& tol = {});

struct IndexStabilityReport {
  long base_index = 0;
  std::vector<long> indices;
  std::vector<long> ker_dims, coker_dims;
  bool stable = true;
};

IndexStabilityReport index_stability(const OperatorFamily& F, const TolerancePolicy& tol = {});

// L_r(g) = g − r·x·g′ on the monomial basis {1, x, …, x^degree}; parameter p = (r).
OperatorFamily dilation_family(int degree, std::vector<double> grid);

// ---------------------------------------------------------------------------
// Singular Neumann problem u″ = f on [0,1], u′(0) = u′(1) = 0.

struct BvpDiscretization {
  int n = 0;
  double h = 0;
  Vec x;
  Vec weights;  // composite trapezoid

  Mat T_matrix() const;
  Vec apply_T(const Vec& u) const;
  Vec apply_S(const Vec& f) const;
  // One-sided O(h²) derivative at both ends; zero for Neumann-constrained u.
  double neumann_defect(const Vec& u) const;
  Vec sample(const std::function<double(double)>& g) const;
};

BvpDiscretization bvp_green(int n);

struct BvpErrors {
  int n = 0;
  double h = 0;
  double err_a = 0;            // ‖S_disc(u″) − (u − u(1))‖∞
  double err_a_composite = 0;  // ‖S_disc(T_disc u) − (u − u(1))‖∞
  double err_b = 0;            // ‖T_disc(S_disc f) − (f − ∫f)‖∞
  double s_of_one = 0;         // ‖S_disc(1)‖∞
  double closed_form = 0;      // ‖S_disc(cos πx) − (−cos πx − 1)/π²‖∞
};

// Errors for u = f = cos(πx).
BvpErrors bvp_errors(const BvpDiscretization& d);

}  // namespace geomred::linops
