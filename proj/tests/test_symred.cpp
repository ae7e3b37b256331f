#include "geomred/symred.hpp"
#include "geomred/sampling.hpp"

#include <doctest.h>

#include <set>

using namespace geomred;
using namespace geomred::symred;

TEST_SUITE("symred") {

TEST_CASE("builtin systems validate") {
  for (const auto& name : builtin_system_names()) {
    const auto s = builtin_system(name);
    CHECK_NOTHROW(s.validate());
    CHECK((s.omega + s.omega.transpose()).norm() == 0);
  }
  CHECK(builtin_system("torus2").abelian());
  CHECK_FALSE(builtin_system("su2_c2").abelian());
  CHECK_THROWS_AS(builtin_system("nope"), Error);
}

TEST_CASE("broken structure constants are caught") {
  auto s = builtin_system("su2_c2");
  s.structure[0] *= -1;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("oscillator momentum is the angular momentum") {
  const auto s = builtin_system("oscillator");
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec x = rng.normal_vec(4);
    CHECK(momentum(s, x).components(0) == doctest::Approx(x(0) * x(3) - x(1) * x(2)));
  }
}

TEST_CASE("momentum map generates the action") {
  // dJ_a(v) = −ω(ξ_a x, v), checked against the Jacobian and finite differences
  Rng rng(4);
  for (const auto& name : {"oscillator", "su2_c2", "torus2"}) {
    const auto s = builtin_system(name);
    for (int i = 0; i < 10; ++i) {
      const Vec x = rng.normal_vec(4), v = rng.normal_vec(4);
      const Mat D = momentum_jacobian(s, x);
      const double h = 1e-6;
      const Vec fd = (momentum(s, x + h * v).pairings - momentum(s, x - h * v).pairings) / (2 * h);
      for (int a = 0; a < s.k(); ++a) {
        const double want = -(s.generators[a] * x).dot(s.omega * v);
        CHECK(std::abs(D.row(a).dot(v) - want) < 1e-12);
        CHECK(std::abs(fd(a) - want) < 1e-7);
      }
      CHECK(momentum_relation_check(s, x, Mat::Identity(4, 4)) < 1e-12);
      CHECK(momentum_equivariance_defect(s, x) < 1e-12);
    }
  }
}

TEST_CASE("cotangent lift momentum pairs the covector with the base action") {
  Mat A(2, 2);
  A << 0, -1, 1, 0;
  const Vec x = (Vec(2) << 0.3, -1.2).finished(), a = (Vec(2) << 2.0, 0.5).finished();
  // ⟨α, A x⟩ = 2·1.2 + 0.5·0.3
  CHECK(cotangent_lift_momentum({A}, x, a).pairings(0) == doctest::Approx(2.55));
  CHECK_THROWS_AS(cotangent_lift_momentum({A}, x, Vec::Ones(3)), Error);
}

TEST_CASE("symplectic orthogonal and canonical basis") {
  const auto s = builtin_system("trivial");
  Mat V = Mat::Zero(4, 1);
  V(0, 0) = 1;  // q₁ axis
  const Mat W = symplectic_orthogonal(s, V);
  CHECK(W.cols() == 3);
  CHECK((V.transpose() * s.omega * W).norm() < 1e-14);
  const Mat C = canonical_basis(W);
  // (q₁)^ω = span(q₁, q₂, p₂)
  CHECK(C.cols() == 3);
  CHECK(std::abs(C.row(2).norm()) < 1e-12);
}

TEST_CASE("fixed points of the reflection") {
  const auto d = fixed_point_decomposition(builtin_system("z2_reflection"));
  CHECK(d.X_G.cols() == 2);
  CHECK(d.complement.cols() == 2);
  CHECK(std::abs(d.restricted_omega.determinant()) == doctest::Approx(1.0));
  // X_G = span(q₁, p₁)
  CHECK(d.X_G.row(1).norm() < 1e-12);
  CHECK(d.X_G.row(3).norm() < 1e-12);
}

TEST_CASE("MGS singular part is exactly quadratic") {
  Rng rng(9);
  for (const auto& name : builtin_system_names()) {
    const auto s = builtin_system(name);
    for (int i = 0; i < 10; ++i) {
      const Vec m = i == 0 ? Vec::Zero(4) : rng.normal_vec(4);
      const auto f = mgs_at(s, m);
      if (f.E.cols() == 0) continue;
      const Vec e = rng.normal_vec(f.E.cols());
      for (double a : {-3.0, 0.1, 7.5}) CHECK(f.scaling_defect(a, e) < 1e-14);
      CHECK(f.invariance_defect < 1e-10);
    }
  }
}

TEST_CASE("MGS at the origin of the SU(2) action carries the full momentum map") {
  const auto s = builtin_system("su2_c2");
  const auto f = mgs_at(s, Vec::Zero(4));
  CHECK(f.stabilizer.cols() == 3);
  CHECK(f.E.cols() == 4);
  Rng rng(3);
  const Vec x = rng.normal_vec(4);
  // E = ℝ⁴ up to an orthonormal change of basis
  CHECK((f.J_sing(f.E.transpose() * x) - momentum(s, x).pairings).norm() < 1e-12);
}

TEST_CASE("bifurcation lemma at random and symmetric points") {
  Rng rng(12);
  for (const auto& name : builtin_system_names()) {
    const auto s = builtin_system(name);
    for (int i = 0; i < 10; ++i) {
      const Vec m = i == 0 ? Vec::Zero(4) : rng.normal_vec(4);
      CHECK(bifurcation_check(s, m).holds(1e-9));
    }
  }
}

TEST_CASE("Witt-Artin decomposition spans the tangent space") {
  Rng rng(6);
  for (const auto& name : {"oscillator", "su2_c2", "torus2"}) {
    const auto s = builtin_system(name);
    for (const Vec& m : {Vec(Vec::Zero(4)), rng.normal_vec(4)}) {
      const auto w = witt_artin(s, m);
      CHECK(w.spans);
      CHECK(w.E_symplectic);
      CHECK(w.dim_E % 2 == 0);
    }
  }
}

TEST_CASE("stabilizer labels") {
  const auto osc = builtin_system("oscillator");
  CHECK(classify_stabilizer(osc, Vec::Zero(4)).stabilizer_dim == 1);
  CHECK(classify_stabilizer(osc, (Vec(4) << 1, 0, 0, 0).finished()).stabilizer_dim == 0);
  const auto t2 = builtin_system("torus2");
  CHECK(classify_stabilizer(t2, Vec::Zero(4)).stabilizer_dim == 2);
  const auto refl = builtin_system("z2_reflection");
  CHECK(classify_stabilizer(refl, (Vec(4) << 1, 0, 2, 0).finished()).finite_order == 2);
  CHECK(classify_stabilizer(refl, (Vec(4) << 1, 1, 0, 0).finished()).finite_order == 1);
}

TEST_CASE("zero level strata") {
  auto labels = [](const std::vector<StratumRecord>& recs) {
    std::set<std::pair<long, long>> out;
    for (const auto& r : recs) out.insert({r.label.stabilizer_dim, r.label.finite_order});
    return out;
  };
  CHECK(labels(reduce_zero_level(builtin_system("oscillator"), 64, 1)) ==
        std::set<std::pair<long, long>>{{0, 1}, {1, 1}});
  CHECK(labels(reduce_zero_level(builtin_system("torus2"), 16, 1)) ==
        std::set<std::pair<long, long>>{{2, 1}});
  CHECK(labels(reduce_zero_level(builtin_system("z2_reflection"), 64, 1)) ==
        std::set<std::pair<long, long>>{{0, 1}, {0, 2}});
}

}  // TEST_SUITE
