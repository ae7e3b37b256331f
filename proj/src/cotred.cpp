#include "geomred/cotred.hpp"

#include "geomred/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

namespace geomred::cotred {

using std::numbers::pi;

const char* to_string(SeamId s) {
  switch (s) {
    case SeamId::PP_SINGULAR: return "PP_SINGULAR";
    case SeamId::LINE: return "LINE";
    case SeamId::TOP: return "TOP";
  }
  return "?";
}

ConePoint K_map(const OscState& s) {
  const double qq = s.q1 * s.q1 + s.q2 * s.q2, pp = s.p1 * s.p1 + s.p2 * s.p2;
  return {0.5 * pp - 0.5 * qq, s.q1 * s.p1 + s.q2 * s.p2, 0.5 * pp + 0.5 * qq};
}

double angular_momentum(const OscState& s) { return s.q1 * s.p2 - s.q2 * s.p1; }

double hamiltonian(const OscState& s) { return K_map(s).h; }

namespace {

// Gradient (∂_q, ∂_p) of a function on T*ℝ².
struct Grad2 {
  Eigen::Vector2d dq, dp;
};

double bracket(const Grad2& f, const Grad2& g) { return f.dp.dot(g.dq) - f.dq.dot(g.dp); }

struct Grad1 {
  double dq, dp;
};

double bracket(const Grad1& f, const Grad1& g) { return f.dp * g.dq - f.dq * g.dp; }

}  // namespace

double poisson_check(const std::vector<OscState>& samples) {
  double d = 0;
  for (const auto& s : samples) {
    const Eigen::Vector2d q = s.q(), p = s.p();
    const Grad2 H{q, p}, Ep{-q, p}, Em{p, q};
    const ConePoint c = K_map(s);
    d = std::max({d, std::abs(bracket(H, Ep) + 2 * c.e_minus),
                  std::abs(bracket(H, Em) - 2 * c.e_plus), std::abs(bracket(Ep, Em) - 2 * c.h)});
  }
  return d;
}

double poisson_check_I(const std::vector<std::array<double, 2>>& samples) {
  double d = 0;
  for (const auto& [qb, pb] : samples) {
    const Grad1 Ep{pb * pb - 1, 2 * qb * pb}, Em{2 * pb, 2 * qb}, H{pb * pb + 1, 2 * qb * pb};
    const ConePoint c = I_map(qb, pb);
    d = std::max({d, std::abs(bracket(H, Ep) + 2 * c.e_minus),
                  std::abs(bracket(H, Em) - 2 * c.e_plus), std::abs(bracket(Ep, Em) - 2 * c.h)});
  }
  return d;
}

SeamId seam_classify(const OscState& s, double tol) {
  if (!(std::abs(angular_momentum(s)) < tol))
    throw Error(ErrorCode::OffConstraint, "state is off the zero momentum level");
  const double nq = s.q().norm(), np = s.p().norm();
  if (nq < tol && np < tol) return SeamId::PP_SINGULAR;
  if (nq < tol) return SeamId::LINE;
  return SeamId::TOP;
}

std::array<double, 2> psi_reduce(const OscState& s, double tol) {
  const double qq = s.q().squaredNorm();
  if (!(std::sqrt(qq) >= tol)) throw Error(ErrorCode::QZero, "psi_reduce needs q != 0");
  return {0.5 * qq, s.q().dot(s.p()) / qq};
}

ConePoint I_map(double q_bar, double p_bar) {
  if (!(q_bar > 0)) throw Error(ErrorCode::NonPositiveQbar, "I_map needs q_bar > 0");
  return {q_bar * (p_bar * p_bar - 1), 2 * q_bar * p_bar, q_bar * (p_bar * p_bar + 1)};
}

ConePoint cone_flow(const ConePoint& c0, double t) {
  const double c = std::cos(2 * t), s = std::sin(2 * t);
  return {c * c0.e_plus - s * c0.e_minus, s * c0.e_plus + c * c0.e_minus, c0.h};
}

TstarValue tstar_flow(double H0_bar, double t0, double t, double blowup_window) {
  const double s = t + t0;
  TstarValue v;
  if (std::abs(std::remainder(s - pi / 2, pi)) < blowup_window) {
    v.blowup = true;
    return v;
  }
  const double c = std::cos(s);
  v.q_bar = H0_bar * c * c;
  v.p_bar = -std::tan(s);
  return v;
}

std::vector<double> blowup_times(double t0, double t_lo, double t_hi) {
  std::vector<double> out;
  const double k0 = std::ceil((t_lo + t0 - pi / 2) / pi);
  for (double k = k0;; k += 1) {
    const double tc = pi / 2 + k * pi - t0;
    if (tc > t_hi) break;
    out.push_back(tc);
  }
  return out;
}

FlowTrajectory oscillator_rk4(const OscState& s0, double t_end, double dt, int sample_every) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
  if (sample_every < 1) throw Error(ErrorCode::InvalidInput, "sample_every must be positive");
  // q̇ = p, ṗ = −q
  auto rhs = [](const Eigen::Vector4d& x) {
    return Eigen::Vector4d(x(2), x(3), -x(0), -x(1));
  };
  FlowTrajectory tr;
  tr.dt = dt;
  const long steps = std::lround(std::ceil(t_end / dt - 1e-9));
  Eigen::Vector4d x = s0.vec();
  tr.times.push_back(0.0);
  tr.states.push_back(s0);
  for (long i = 1; i <= steps; ++i) {
    const Eigen::Vector4d k1 = rhs(x);
    const Eigen::Vector4d k2 = rhs(x + 0.5 * dt * k1);
    const Eigen::Vector4d k3 = rhs(x + 0.5 * dt * k2);
    const Eigen::Vector4d k4 = rhs(x + dt * k3);
    x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (i % sample_every == 0 || i == steps) {
      tr.times.push_back(static_cast<double>(i) * dt);
      tr.states.push_back(OscState::from(x));
    }
  }
  return tr;
}

FrontierReport seam_frontier_check(int n_samples, std::uint64_t seed) {
  FrontierReport rep;
  Rng rng(seed);
  std::set<std::pair<SeamId, SeamId>> realized;

  auto run = [&](const std::string& name, auto term, const OscState& limit) {
    FrontierReport::Sequence seq;
    seq.name = name;
    seq.lower = seam_classify(limit);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 6; ++j) {
      const double k = std::pow(10.0, j);
      const OscState s = term(k);
      const SeamId lab = seam_classify(s);
      if (j == 0) seq.upper = lab;
      seq.labels_ok = seq.labels_ok && lab == seq.upper;
      const double dist = (s.vec() - limit.vec()).norm();
      seq.converges = seq.converges && dist <= prev;
      prev = dist;
      seq.final_distance = dist;
    }
    seq.converges = seq.converges && seq.final_distance < 1e-5;
    if (seq.labels_ok && seq.converges && seq.upper != seq.lower)
      realized.insert({seq.upper, seq.lower});
    rep.sequences.push_back(seq);
  };

  for (int i = 0; i < n_samples; ++i) {
    const double a = rng.uniform(0, 2 * pi), c = rng.uniform(0.5, 2.0);
    const Eigen::Vector2d u(std::cos(a), std::sin(a));
    auto mk = [](const Eigen::Vector2d& q, const Eigen::Vector2d& p) {
      return OscState{q(0), q(1), p(0), p(1)};
    };
    run("top_to_vertex", [&](double k) { return mk(u / k, c * u / k); }, OscState{});
    run("top_to_line", [&](double k) { return mk(u / k, c * u); }, mk({0, 0}, c * u));
    run("line_to_vertex", [&](double k) { return mk({0, 0}, c * u / k); }, OscState{});
    run("vertex_constant", [&](double) { return OscState{}; }, OscState{});
  }
  rep.realized.assign(realized.begin(), realized.end());
  const std::set<std::pair<SeamId, SeamId>> expected = {{SeamId::LINE, SeamId::PP_SINGULAR},
                                                        {SeamId::TOP, SeamId::PP_SINGULAR},
                                                        {SeamId::TOP, SeamId::LINE}};
  bool all_ok = true;
  for (const auto& s : rep.sequences) all_ok = all_ok && s.labels_ok && s.converges;
  rep.matches_expected = all_ok && realized == expected;
  return rep;
}

}  // namespace geomred::cotred
