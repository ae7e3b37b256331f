#include "geomred/linops.hpp"
#include "geomred/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace geomred;
using namespace geomred::linops;

namespace {

Mat random_orthonormal(Rng& rng, Eigen::Index n, Eigen::Index k) {
  Eigen::HouseholderQR<Mat> qr(rng.normal_mat(n, n));
  return Mat(qr.householderQ()).leftCols(k);
}

// T = U diag(σ) Vᵀ with known factors; the pseudoinverse is V diag(1/σ) Uᵀ.
struct Constructed {
  Mat T, pinv;
  Eigen::Index rank;
};

Constructed constructed(Rng& rng, Eigen::Index m, Eigen::Index n, Eigen::Index r) {
  Mat U = random_orthonormal(rng, m, r), V = random_orthonormal(rng, n, r);
  Vec s(r);
  for (Eigen::Index i = 0; i < r; ++i) s(i) = rng.uniform(0.5, 2.0);
  return {U * s.asDiagonal() * V.transpose(), V * s.cwiseInverse().asDiagonal() * U.transpose(), r};
}

}  // namespace

TEST_SUITE("linops") {

TEST_CASE("generalized inverse matches constructed pseudoinverse") {
  Rng rng(11);
  for (auto [m, n] : {std::pair{5, 5}, {10, 7}, {7, 10}, {1, 4}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto c = constructed(rng, m, n, rng.integer(1, std::min(m, n)));
      const auto g = generalized_inverse(c.T);
      CHECK((g.S_mat - c.pinv).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(g.tst_residual < 1e-12);
      CHECK(g.sts_residual < 1e-12);
      CHECK(g.reflexive);
    }
  }
}

TEST_CASE("zero matrix has zero generalized inverse and full kernel") {
  const Mat Z = Mat::Zero(3, 4);
  const auto f = rank_factorize(Z);
  CHECK(f.rank == 0);
  CHECK(f.ker_basis.cols() == 4);
  CHECK(f.coker_basis.cols() == 3);
  CHECK(generalized_inverse(Z).S_mat.isZero());
  CHECK(fredholm_index(Z) == 1);
}

TEST_CASE("rank factorization reconstructs and projections are complementary") {
  Rng rng(3);
  const auto c = constructed(rng, 8, 6, 4);
  const auto f = rank_factorize(c.T);
  CHECK(f.rank == 4);
  CHECK((f.reconstruct() - c.T).norm() < 1e-12);
  const Mat I6 = Mat::Identity(6, 6), I8 = Mat::Identity(8, 8);
  CHECK((f.pr_ker() + f.pr_coim() - I6).norm() < 1e-12);
  CHECK((f.pr_im() + f.pr_coker() - I8).norm() < 1e-12);
  CHECK((c.T * f.ker_basis).norm() < 1e-12);
  CHECK((f.coker_basis.transpose() * c.T).norm() < 1e-12);
  CHECK(fredholm_index(c.T) == 2 - 4);
}

TEST_CASE("complex scalars go through the same templates") {
  CMat T(2, 3);
  T << cplx(1, 1), cplx(0, 2), cplx(1, 0), cplx(2, 2), cplx(0, 4), cplx(2, 0);
  const auto g = generalized_inverse(T);
  CHECK(rank_factorize(T).rank == 1);
  // rank one: T⁺ = T* / ‖T‖²_F
  CHECK((g.S_mat - T.adjoint() / T.squaredNorm()).norm() < 1e-12);
}

TEST_CASE("non-finite input is rejected") {
  Mat T = Mat::Identity(2, 2);
  T(0, 1) = std::nan("");
  CHECK_THROWS_AS(rank_factorize(T), Error);
  try {
    generalized_inverse(T);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("bordered operator: T_pm = 0 gives the reflexive inverse") {
  Rng rng(5);
  const auto c = constructed(rng, 6, 5, 3);
  const auto e = extend_block(c.T);
  CHECK(e.lower_right_norm < 1e-12);
  CHECK((e.S_mat - c.pinv).norm() < 1e-10);
  CHECK((e.S_minus * e.T_minus).isApprox(rank_factorize(c.T).pr_ker(), 1e-10));
  CHECK((e.T_plus * e.S_plus).isApprox(rank_factorize(c.T).pr_coker(), 1e-10));
}

TEST_CASE("bordered operator: T_pm != 0 leaves the lower-right block zero but breaks reflexivity") {
  Rng rng(6);
  const auto c = constructed(rng, 6, 5, 3);
  const auto f = rank_factorize(c.T);
  const Mat Tpm = rng.normal_mat(f.ker_basis.cols(), f.coker_basis.cols());
  const auto e = extend_block_with<double>(c.T, f, Tpm);
  CHECK((e.extended * e.extended_inverse - Mat::Identity(8, 8)).norm() < 1e-10);
  // block elimination in adapted coordinates: the Z⁻ → Z⁺ block is identically zero
  CHECK(e.lower_right_norm < 1e-12);
  // S = T⁺ − S⁻ T⁺⁻ S⁺
  CHECK((e.S_mat - (c.pinv - e.S_minus * Tpm * e.S_plus)).norm() < 1e-10);
  CHECK((c.T * e.S_mat * c.T - c.T).norm() < 1e-10);
  CHECK((e.S_mat * c.T * e.S_mat - e.S_mat).norm() > 1e-3);
}

TEST_CASE("Schur complement against a hand computation") {
  Mat B(3, 3);
  B << 4, 1, 2,
       1, 3, 0,
       2, 0, 2;
  // B11 − B12 B22⁻¹ B21 with B22 = 2: [[4 − 2, 1], [1, 3]]
  Mat want(2, 2);
  want << 2, 1, 1, 3;
  CHECK((schur_recover(B, 2) - want).norm() < 1e-14);
  Mat Bs = B;
  Bs(2, 2) = 0;
  CHECK_THROWS_AS(schur_recover(Bs, 2), Error);
  CHECK((schur_recover(B, 3) - B).norm() == 0);
}

TEST_CASE("subspace helpers") {
  Mat A(3, 1), B(3, 2), C(3, 1);
  A << 1, 1, 0;
  B << 1, 0, 0, 1, 0, 0;
  C << 0, 0, 1;
  CHECK(containment_defect(A, B) < 1e-14);
  CHECK(containment_defect(C, B) == doctest::Approx(1.0));
  CHECK(subspace_distance(A, B) == 1.0);
  CHECK(intersect(A, B).cols() == 1);
  CHECK(intersect(C, B).cols() == 0);
  CHECK(orth_complement(B).cols() == 1);
  CHECK(std::abs(orth_complement(B)(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("dilation family is singular at r = 1/n with kernel x^n") {
  std::vector<double> grid;
  for (int n = 1; n <= 10; ++n) grid.push_back(1.0 / n);
  grid.push_back(0.37);
  const auto rep = family_uniform_regular(dilation_family(10, grid));
  CHECK_FALSE(rep.uniformly_regular);
  for (int n = 1; n <= 10; ++n) {
    const auto& p = rep.points[n - 1];
    CHECK_FALSE(p.tilde_invertible);
    REQUIRE(p.tilde_kernel.cols() == 1);
    Vec want = Vec::Zero(11);
    want(n) = 1;
    CHECK(std::min((p.tilde_kernel.col(0) - want).norm(), (p.tilde_kernel.col(0) + want).norm()) < 1e-10);
    CHECK(p.kernel_residual < 1e-10);
  }
  CHECK(rep.points.back().tilde_invertible);
}

TEST_CASE("diag(1, p) family is uniformly regular but its kernel jumps") {
  OperatorFamily F;
  F.eval = [](const Vec& p) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = p(0);
    return m;
  };
  F.base = Vec::Zero(1);
  for (double p : {0.0, 1e-3, 0.1, 0.5}) F.grid.push_back(Vec::Constant(1, p));
  const auto rep = family_uniform_regular(F);
  CHECK(rep.uniformly_regular);
  CHECK(rep.base_rank == 1);
  CHECK(rep.points[1].ker_contained);
  const auto idx = index_stability(F);
  CHECK(idx.stable);
  CHECK(idx.ker_dims[0] == 1);
  CHECK(idx.ker_dims[1] == 0);
}

TEST_CASE("BVP Green operator is second order") {
  const int ns[] = {64, 128, 256};
  BvpErrors prev;
  for (int i = 0; i < 3; ++i) {
    const auto e = bvp_errors(bvp_green(ns[i]));
    CHECK(e.err_a < 5 * e.h * e.h);
    CHECK(e.err_b < 5 * e.h * e.h);
    CHECK(e.s_of_one < 1e-12);
    CHECK(e.closed_form < 5 * e.h * e.h);
    if (i > 0) {
      CHECK(prev.err_a / e.err_a == doctest::Approx(4.0).epsilon(0.125));
      CHECK(prev.err_b / e.err_b == doctest::Approx(4.0).epsilon(0.125));
    }
    prev = e;
  }
}

TEST_CASE("BVP discrete operators") {
  const auto d = bvp_green(33);
  CHECK(d.x.size() == 33);
  CHECK(d.h == doctest::Approx(1.0 / 32));
  // trapezoid weights sum to 1
  CHECK(std::abs(d.weights.sum() - 1.0) < 1e-14);
  CHECK(d.apply_T(Vec::Ones(33)).cwiseAbs().maxCoeff() < 1e-10);
  auto g = [](double x) { return std::cos(std::numbers::pi * x) + x * x; };
  const Vec u = d.apply_S(d.sample(g));
  CHECK(std::abs(u(32)) < 1e-12);
  CHECK((d.T_matrix() * u - d.apply_T(u)).norm() < 1e-9);
  // S f satisfies the Neumann condition up to the O(h²) stencil error
  const auto d2 = bvp_green(65);
  CHECK(d2.neumann_defect(d2.apply_S(d2.sample(g))) < d.neumann_defect(u) / 3);
  CHECK_THROWS_AS(bvp_green(4), Error);
}

}  // TEST_SUITE
