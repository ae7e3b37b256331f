#include "geomred/cotred.hpp"
#include "geomred/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace geomred;
using namespace geomred::cotred;
using std::numbers::pi;

namespace {

// q and p parallel, so J = 0 and q ≠ 0.
OscState top_state(Rng& rng) {
  const double a = rng.uniform(0, 2 * pi), r = rng.uniform(0.1, 3), c = rng.normal();
  return {r * std::cos(a), r * std::sin(a), c * std::cos(a), c * std::sin(a)};
}

}  // namespace

TEST_SUITE("cotred") {

TEST_CASE("K map on a hand example") {
  const OscState s{1, 2, 3, -1};
  const auto c = K_map(s);
  CHECK(c.e_plus == doctest::Approx(0.5 * 10 - 0.5 * 5));
  CHECK(c.e_minus == doctest::Approx(3 - 2));
  CHECK(c.h == doctest::Approx(7.5));
  CHECK(angular_momentum(s) == doctest::Approx(-1 - 6));
  // H² − J² = E₊² + E₋²
  CHECK(std::abs(c.h * c.h - 49 - c.e_plus * c.e_plus - c.e_minus * c.e_minus) < 1e-12);
}

TEST_CASE("bracket relations") {
  Rng rng(1);
  std::vector<OscState> xs;
  std::vector<std::array<double, 2>> ys;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(OscState::from(rng.normal_vec(4)));
    ys.push_back({rng.uniform(0.1, 3), rng.normal()});
  }
  CHECK(poisson_check(xs) < 1e-12);
  CHECK(poisson_check_I(ys) < 1e-12);
}

TEST_CASE("brackets by finite differences on the flow") {
  // ḟ = {H, f}: along the exact flow E₊ changes at rate −2E₋
  const OscState s{0.3, -0.8, 1.1, 0.4};
  auto flow = [&](double t) {
    const double c = std::cos(t), n = std::sin(t);
    return OscState{c * s.q1 + n * s.p1, c * s.q2 + n * s.p2, c * s.p1 - n * s.q1, c * s.p2 - n * s.q2};
  };
  const double h = 1e-5;
  const double dEp = (K_map(flow(h)).e_plus - K_map(flow(-h)).e_plus) / (2 * h);
  const double dEm = (K_map(flow(h)).e_minus - K_map(flow(-h)).e_minus) / (2 * h);
  CHECK(dEp == doctest::Approx(-2 * K_map(s).e_minus).epsilon(1e-8));
  CHECK(dEm == doctest::Approx(2 * K_map(s).e_plus).epsilon(1e-8));
}

TEST_CASE("seams") {
  CHECK(seam_classify(OscState{}) == SeamId::PP_SINGULAR);
  CHECK(seam_classify(OscState{0, 0, 1, 2}) == SeamId::LINE);
  CHECK(seam_classify(OscState{1, 0, 2, 0}) == SeamId::TOP);
  try {
    seam_classify(OscState{1, 0, 0, 1});
    FAIL("expected OffConstraint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OffConstraint);
  }
}

TEST_CASE("I after psi equals K on the top seam") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const OscState s = top_state(rng);
    REQUIRE(seam_classify(s, 1e-9) == SeamId::TOP);
    const auto [qb, pb] = psi_reduce(s);
    CHECK((I_map(qb, pb).vec() - K_map(s).vec()).norm() < 1e-12);
    CHECK(std::abs(I_map(qb, pb).cone_defect()) < 1e-12 * (1 + qb * qb * (1 + pb * pb) * (1 + pb * pb)));
  }
}

TEST_CASE("chart preconditions") {
  CHECK_THROWS_AS(psi_reduce(OscState{0, 0, 1, 1}), Error);
  try {
    I_map(0, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveQbar);
  }
}

TEST_CASE("cone flow is a rotation by 2t") {
  const ConePoint c{1, 0, 1};
  const auto r = cone_flow(c, pi / 4);
  CHECK(std::abs(r.e_plus) < 1e-15);
  CHECK(r.e_minus == doctest::Approx(1));
  CHECK(r.h == 1);
}

TEST_CASE("reduced flow matches the closed form and crosses blow-ups") {
  const double H0 = 1.3, t0 = 0.3;
  const auto v0 = tstar_flow(H0, t0, 0);
  const ConePoint c0 = I_map(v0.q_bar, v0.p_bar);
  // I∘tstar = H₀(−cos 2s, −sin 2s, 1) with s = t + t₀
  CHECK(std::abs(c0.e_plus + H0 * std::cos(2 * t0)) < 1e-14);
  CHECK(std::abs(c0.e_minus + H0 * std::sin(2 * t0)) < 1e-14);
  const auto tc = blowup_times(t0, 0, 5);
  REQUIRE(tc.size() == 2);
  CHECK(tc[0] == doctest::Approx(pi / 2 - t0));
  for (double t : tc) {
    CHECK(tstar_flow(H0, t0, t).blowup);
    for (double dt : {-1e-4, 1e-4}) {
      const auto v = tstar_flow(H0, t0, t + dt);
      REQUIRE_FALSE(v.blowup);
      CHECK((I_map(v.q_bar, v.p_bar).vec() - cone_flow(c0, t + dt).vec()).norm() < 1e-6);
    }
  }
}

TEST_CASE("RK4 conserves angular momentum and tracks the exact solution") {
  const OscState s0{1, 0, 0.5, 0.7};
  const auto tr = oscillator_rk4(s0, 20, 1e-3, 100);
  CHECK(tr.times.back() == doctest::Approx(20));
  double drift = 0, err = 0;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const double t = tr.times[i], c = std::cos(t), n = std::sin(t);
    const OscState& s = tr.states[i];
    drift = std::max(drift, std::abs(angular_momentum(s) - angular_momentum(s0)));
    err = std::max(err, std::abs(s.q1 - (c * s0.q1 + n * s0.p1)) + std::abs(s.p2 - (c * s0.p2 - n * s0.q2)));
  }
  CHECK(drift < 1e-8);
  CHECK(err < 1e-9);
  CHECK_THROWS_AS(oscillator_rk4(s0, 1, 0, 1), Error);
}

TEST_CASE("seam frontier closure") {
  const auto rep = seam_frontier_check(8, 3);
  CHECK(rep.matches_expected);
  CHECK(rep.realized.size() == 3);
}

}  // TEST_SUITE
