#include "geomred/gaugealg.hpp"
#include "geomred/io.hpp"
#include "geomred/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace geomred;
using namespace geomred::gaugealg;
using std::numbers::pi;

namespace {

const cplx I1(0, 1);

SU2Elem random_elem(Rng& rng) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q(i) = rng.normal();
  q.normalize();
  return {cplx(q(0), q(1)), cplx(q(2), q(3))};
}

// Complex dimension of {X ∈ M₂(ℂ) : Xg = gX for all g}, via (I ⊗ g − gᵀ ⊗ I) vec X = 0.
long kron_commutant_dim(const std::vector<CMat>& gs) {
  CMat M(4 * gs.size(), 4);
  const CMat I = CMat::Identity(2, 2);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    CMat K(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        K.block(2 * i, 2 * j, 2, 2) = I(i, j) * gs[k] - gs[k](j, i) * I;
      }
    M.middleRows(4 * k, 4) = K;
  }
  Eigen::JacobiSVD<CMat> svd(M);
  long rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9) ++rank;
  return 4 - rank;
}

OrbitType oracle_type(const std::vector<CMat>& gs) {
  switch (kron_commutant_dim(gs)) {
    case 4: return OrbitType::SU2;
    case 2: return OrbitType::U1;
    default: return OrbitType::Z2;
  }
}

EWPoint stratum_point(Rng& rng) {
  EWPoint p;
  p.g = rng.uniform(0.2, 1.5);
  p.gp = rng.uniform(0.2, 1.5);
  p.lambda = rng.uniform(0.05, 0.5);
  p.v = rng.uniform(0.5, 2);
  p.ell = rng.uniform(0.5, 2);
  p.Z = rng.normal();
  p.A_gamma = rng.normal();
  p.D_Z = rng.normal();
  p.D_gamma = rng.normal();
  p.eta = rng.uniform(0, 2);
  p.Pi2 = cplx(rng.normal(), rng.normal());
  p.dAgamma = rng.normal();
  p.dZ = rng.normal();
  p.deta = rng.normal();
  return p;
}

}  // namespace

TEST_SUITE("gaugealg") {

TEST_CASE("SU(2) elements and the exponential") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const SU2Elem a = random_elem(rng), b = random_elem(rng);
    CHECK(((a * b).matrix() - a.matrix() * b.matrix()).norm() < 1e-14);
    CHECK((a.inverse().matrix() - a.matrix().adjoint()).norm() < 1e-15);
    CHECK(std::abs(a.matrix().determinant() - 1.0) < 1e-14);
    const Eigen::Vector3d th = rng.normal_vec(3);
    const CMat X = th(0) * su2_generator(0) + th(1) * su2_generator(1) + th(2) * su2_generator(2);
    // power series of exp(X)
    CMat E = CMat::Identity(2, 2), term = CMat::Identity(2, 2);
    for (int k = 1; k < 40; ++k) {
      term = term * X / static_cast<double>(k);
      E += term;
    }
    CHECK((su2_exp(th).matrix() - E).norm() < 1e-12);
  }
}

TEST_CASE("emitted tables match the goldens") {
  CHECK(format_holonomy_table(su2_centralizer_table()) ==
        io::read_file(std::string(GEOMRED_GOLDEN_DIR) + "/holonomy_centralizers.txt"));
  CHECK(format_howe_table(goursat_families()) ==
        io::read_file(std::string(GEOMRED_GOLDEN_DIR) + "/howe_subgroups.txt"));
}

TEST_CASE("centralizer table is confirmed by sampling") {
  for (const auto& c : verify_centralizer_table(3, 100)) {
    CHECK(c.stabilizer.ok);
    CHECK(c.howe.ok);
    CHECK(c.howe.commute_defect < 1e-10);
  }
}

TEST_CASE("centralizer check rejects wrong claims") {
  Rng rng(2);
  const std::vector<SU2Elem> torus = {SU2Elem{std::polar(1.0, 0.7), 0.0}};
  CHECK(check_centralizer(torus, SU2Class::U1, 1).ok);
  CHECK_FALSE(check_centralizer(torus, SU2Class::SU2, 1).ok);
  CHECK_FALSE(check_centralizer(torus, SU2Class::Z2, 1).ok);
  const std::vector<SU2Elem> generic = {random_elem(rng), random_elem(rng)};
  CHECK(check_centralizer(generic, SU2Class::Z2, 1).ok);
  CHECK_FALSE(check_centralizer(generic, SU2Class::U1, 1).ok);
}

TEST_CASE("Howe products") {
  const auto all = howe_product_enumerate();
  CHECK(all == std::vector<std::string>{"SU(2)xU(1)", "U(1)xU(1)", "Z2xU(1)"});
  CHECK(howe_product({SU2Class::U1, SU2Class::U1}) == std::vector<std::string>{"U(1)xU(1)"});
  CHECK_THROWS_AS(howe_product({}), Error);
}

TEST_CASE("Goursat families and enumeration") {
  const auto fam = goursat_families();
  CHECK(fam.size() == 13);
  CHECK(fam.back().unenumerated);
  for (const auto& t : fam)
    if (!t.unenumerated) CHECK(t.symbolic_valid());
  for (const auto& t : goursat_enumerate(3)) {
    if (t.unenumerated) continue;
    const auto c = verify_goursat(t, 5, 100);
    CHECK(c.ok);
    CHECK(c.relation_defect < 1e-10);
  }
  CHECK_THROWS_AS(goursat_enumerate(0), Error);
}

TEST_CASE("symbolic validity rejects mismatched quotients") {
  GoursatTuple t;
  t.howe = SU2Class::SU2;
  t.G1 = {Sym::Z2};
  t.G2 = {Sym::E};
  t.L1 = {Sym::U1};
  t.L2 = {Sym::U1};
  t.theta = Theta::Trivial;
  // Z2/{e} cannot map isomorphically onto the trivial quotient
  CHECK_FALSE(t.symbolic_valid());
  t.G2 = {Sym::Z2};
  CHECK(t.symbolic_valid());
  t.L2 = {Sym::Zn, 0};
  CHECK_FALSE(t.symbolic_valid());  // U(1)/Zp is not trivial
}

TEST_CASE("conjugation of the torus against direct multiplication") {
  Rng rng(7);
  int checked = 0;
  while (checked < 10000) {
    const SU2Elem a = random_elem(rng);
    if (std::abs(a.alpha) < 1e-6) continue;
    const double th = rng.uniform(0, 4 * pi);
    CMat k(2, 2);
    k << std::polar(1.0, th / 2), 0, 0, std::polar(1.0, -th / 2);
    const CMat direct = a.matrix() * k * a.matrix().adjoint();
    const auto r = conjugate_K(a, th);
    CHECK((r.matrix - direct).cwiseAbs().maxCoeff() < 1e-12);
    const bool diag = std::abs(direct(0, 1)) < 1e-9 && std::abs(direct(1, 0)) < 1e-9;
    CHECK(r.in_K == (std::abs(a.beta) <= 1e-12 || std::abs(std::polar(1.0, th) - 1.0) <= 1e-12));
    CHECK(r.in_K == diag);
    ++checked;
  }
  Rng rng2(8);
  for (double th : {0.0, 2 * pi}) CHECK(conjugate_K(random_elem(rng2), th).in_K);
  // β = 1/√2, θ = π: off-diagonal −αβ̄(e^{−iπ/2} − e^{iπ/2}) = 2iαβ̄
  const SU2Elem h{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  const auto rh = conjugate_K(h, pi);
  CHECK_FALSE(rh.in_K);
  CHECK(std::abs(rh.matrix(0, 1) - cplx(0, 1)) < 1e-15);
  // α = 0 and θ = 2π: a·k·a⁻¹ = −1 ∈ K
  CHECK(conjugate_K(SU2Elem{0.0, 1.0}, 2 * pi).in_K);
  CHECK(conjugate_K(SU2Elem{std::polar(1.0, 0.3), 0.0}, 1.1).in_K);
}

TEST_CASE("pair stabilizer") {
  CHECK(stabilizer_pair({0.0, cplx(1e-14, 0)}) == PairStabilizer::K);
  CHECK(stabilizer_pair({0.0, cplx(0, 0.5)}) == PairStabilizer::Z2);
  CHECK(std::string(to_string(PairStabilizer::Z2)) == "Z2");
}

TEST_CASE("electroweak basis change") {
  EWPoint p;
  p.g = p.gp = 0.8;
  p.W1 = 0.3;
  p.W2 = -1.1;
  p.W3 = 2.0;
  p.B = 0.5;
  const auto f = ew_basis_change(p, Direction::Forward);
  CHECK(f.Z == doctest::Approx((2.0 - 0.5) / std::sqrt(2.0)));
  CHECK(f.A_gamma == doctest::Approx((2.0 + 0.5) / std::sqrt(2.0)));
  CHECK(std::abs(f.W_plus - cplx(0.3, 1.1) / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(f.W_minus - std::conj(f.W_plus)) < 1e-15);
  const auto b = ew_basis_change(f, Direction::Inverse);
  CHECK(std::abs(b.W1 - p.W1) + std::abs(b.W2 - p.W2) + std::abs(b.W3 - p.W3) + std::abs(b.B - p.B) < 1e-14);
  EWPoint bad;
  bad.g = 0;
  CHECK_THROWS_AS(ew_basis_change(bad, Direction::Forward), Error);
  CHECK(ew_commutators_check() < 1e-15);
  CHECK(p.e() == doctest::Approx(0.8 / std::sqrt(2.0)));
}

TEST_CASE("electroweak point validation") {
  EWPoint p;
  p.eta = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  p.eta = 1;
  p.Z = std::nan("");
  try {
    p.validate();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("singular stratum density") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto p = stratum_point(rng);
    const auto r = singular_hamiltonian_identity(p);
    CHECK(r.max_defect < 1e-12 * (1 + std::abs(r.general)));
    CHECK(std::abs(r.potential - 0.5 * p.lambda * std::pow(p.v, 4) * std::pow(p.eta * p.eta - 1, 2)) < 1e-12);
  }
  EWPoint only;
  only.D_Z = 1.7;
  only.ell = 2.0;
  CHECK(general_density(only) == doctest::Approx(0.5 * 2.0 * 1.7 * 1.7));
  only.W_plus = 0.1;
  CHECK_THROWS_AS(singular_hamiltonian_identity(only), Error);
}

TEST_CASE("Gauss constraint on and off the stratum") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto r = gauss_singular_reduction(stratum_point(rng));
    CHECK(r.collapsed);
  }
  auto p = stratum_point(rng);
  p.Pi2 = 0.7;
  CHECK(std::abs(gauss_algebraic_parts(p).c_source) < 1e-15);
  p.W_minus = cplx(0.2, 0.1);
  p.D_minus = cplx(-0.3, 0.4);
  const auto parts = gauss_algebraic_parts(p);
  CHECK(std::abs(parts.c_coupling) > 1e-3);
  CHECK(std::abs(parts.d_rhs) > 1e-3);
  CHECK_THROWS_AS(gauss_singular_reduction(p), Error);
}

TEST_CASE("Z mass") {
  EWPoint p;
  p.eta = 1;
  p.v = 2;
  p.g = p.gp = 1;
  const auto m = masses(p);
  CHECK(m.mZ_sq == doctest::Approx(2.0));
  CHECK(std::abs(m.mZ_sq_fd - 2.0) < 1e-10);
  p.eta = 0;
  CHECK(masses(p).mZ_sq == 0);
  CHECK(masses(p).eta_printed == doctest::Approx(-4 * 0.13 * 4));
}

TEST_CASE("virtual dimension of the instanton moduli") {
  CHECK(asd_virtual_dim(4, 2, 3) == 5.0);
  CHECK(asd_virtual_dim(4, 1, 3) == 6.5);
  CHECK(asd_virtual_dim(0, 0, 1) == 0.0);
}

TEST_CASE("relation map against naive products") {
  Rng rng(10);
  for (int genus : {1, 2, 3}) {
    RepVarPoint pt;
    pt.genus = genus;
    CMat naive = CMat::Identity(2, 2);
    for (int i = 0; i < genus; ++i) {
      const SU2Elem a = random_elem(rng), b = random_elem(rng);
      pt.su2.push_back(a);
      pt.su2.push_back(b);
      const CMat A = a.matrix(), B = b.matrix();
      naive = naive * A * B * A.inverse() * B.inverse();
    }
    CHECK((relation_map(pt) - naive).norm() < 1e-13);
  }
  // a = exp(iσ₃π/4), b = exp(iσ₁π/4)
  RepVarPoint pt;
  pt.su2 = {su2_exp({0, 0, pi / 2}), su2_exp({pi / 2, 0, 0})};
  CMat A(2, 2), B(2, 2);
  const double c = std::cos(pi / 4);
  A << cplx(c, c), 0, 0, cplx(c, -c);
  B << c, cplx(0, c), cplx(0, c), c;
  CHECK((relation_map(pt) - A * B * A.adjoint() * B.adjoint()).norm() < 1e-14);
  RepVarPoint bad;
  bad.su2 = {SU2Elem{}};
  CHECK_THROWS_AS(relation_map(bad), Error);
}

TEST_CASE("tangent rank on the representation variety") {
  Rng rng(11);
  RepVarPoint torus;
  torus.su2 = {SU2Elem{std::polar(1.0, 0.4), 0.0}, SU2Elem{std::polar(1.0, -1.3), 0.0}};
  const auto t = repvar_tangent_rank(torus, 1e-10);
  CHECK(t.jacobian_rank == 2);
  CHECK(t.local_dim == 4);
  RepVarPoint central;
  central.su2 = {SU2Elem{}, SU2Elem{-1.0, 0.0}};
  CHECK(repvar_tangent_rank(central, 1e-10).jacobian_rank == 0);
  RepVarPoint generic;
  generic.su2 = {random_elem(rng), random_elem(rng)};
  try {
    repvar_tangent_rank(generic, 1e-10);
    FAIL("expected OffVariety");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OffVariety);
  }
  // with the target set to the actual value the relation holds and the map is a submersion
  CHECK(repvar_tangent_rank(generic, 1e-10, relation_map(generic)).jacobian_rank == 3);
  RepVarPoint u;
  u.abelian = true;
  u.u1 = {std::polar(1.0, 0.2), std::polar(1.0, 2.9)};
  const auto tu = repvar_tangent_rank(u, 1e-12);
  CHECK(tu.jacobian_rank == 0);
  CHECK(tu.local_dim == 2);
}

TEST_CASE("U(1) symplectic form") {
  const cplx a = std::polar(1.0, 0.5), b = std::polar(1.0, -2.0);
  CHECK(sigma_form_u1(a, b, 1, 0, 0, 1) == 1.0);
  CHECK(sigma_form_u1(a, b, 0, 1, 1, 0) == -1.0);
  CHECK(sigma_form_u1(a, b, 2, 3, 2, 3) == 0.0);
  CHECK_THROWS_AS(sigma_form_u1(2.0, b, 1, 0, 0, 1), Error);
}

TEST_CASE("orbit types against the Kronecker commutant") {
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    RepVarPoint pt;
    const int kind = i % 3;
    const SU2Elem h = random_elem(rng);
    if (kind == 0) {
      pt.su2 = {random_elem(rng), random_elem(rng)};
    } else if (kind == 1) {
      // a common conjugated torus
      pt.su2 = {h * SU2Elem{std::polar(1.0, rng.uniform(0, 2 * pi)), 0.0} * h.inverse(),
                h * SU2Elem{std::polar(1.0, rng.uniform(0, 2 * pi)), 0.0} * h.inverse()};
    } else {
      pt.su2 = {SU2Elem{rng.integer(0, 1) ? 1.0 : -1.0, 0.0}, SU2Elem{-1.0, 0.0}};
    }
    const auto want = oracle_type({pt.su2[0].matrix(), pt.su2[1].matrix()});
    CHECK(repvar_orbit_type(pt) == want);
    CHECK(su2_commutant_dim(pt.su2) + 1 == kron_commutant_dim({pt.su2[0].matrix(), pt.su2[1].matrix()}));
  }
  RepVarPoint u;
  u.abelian = true;
  u.u1 = {1.0, I1};
  CHECK(repvar_orbit_type(u) == OrbitType::U1);
}

}  // TEST_SUITE
