#include "geomred/symred.hpp"

#include "geomred/linops.hpp"
#include "geomred/sampling.hpp"

#include <cmath>
#include <numbers>

namespace geomred::symred {

using linops::intersect;
using linops::null_space;
using linops::orth;
using linops::orth_complement;
using linops::subspace_distance;

Mat canonical_omega(int n) {
  Mat W = Mat::Zero(2 * n, 2 * n);
  W.topRightCorner(n, n) = Mat::Identity(n, n);
  W.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return W;
}

namespace {

// Real form of a complex n×n matrix acting on z = q + ip, in (q, p) coordinates.
Mat realify(const CMat& M) {
  const Eigen::Index n = M.rows();
  Mat R(2 * n, 2 * n);
  R << M.real(), -M.imag(), M.imag(), M.real();
  return R;
}

double eps3(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

// Null space with an absolute singular-value threshold.
Mat null_abs(const Mat& M, double thresh) {
  if (M.cols() == 0) return Mat(0, 0);
  if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > thresh) ++r;
  return svd.matrixV().rightCols(M.cols() - r);
}

Mat orbit_matrix(const LinearSymplecticSystem& sys, const Vec& m) {
  Mat O(sys.dim, sys.k());
  for (int a = 0; a < sys.k(); ++a) O.col(a) = sys.generators[a] * m;
  return O;
}

Mat span_action(const LinearSymplecticSystem& sys, const Mat& coeffs, const Vec& m) {
  Mat out(sys.dim, coeffs.cols());
  for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
    Vec v = Vec::Zero(sys.dim);
    for (int a = 0; a < sys.k(); ++a) v += coeffs(a, j) * (sys.generators[a] * m);
    out.col(j) = v;
  }
  return out;
}

Mat combine(const LinearSymplecticSystem& sys, const Vec& c) {
  Mat X = Mat::Zero(sys.dim, sys.dim);
  for (int a = 0; a < sys.k(); ++a) X += c(a) * sys.generators[a];
  return X;
}

double point_scale(const Vec& m) { return std::max(1.0, m.norm()); }

}  // namespace

bool LinearSymplecticSystem::abelian() const {
  for (const auto& c : structure)
    if (c.cwiseAbs().maxCoeff() > 0) return false;
  return true;
}

void LinearSymplecticSystem::validate(double tol) const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidInput, m); };
  if (dim <= 0 || dim % 2) fail("phase-space dimension must be even and positive");
  if (omega.rows() != dim || omega.cols() != dim) fail("omega has wrong shape");
  require_finite(omega, "omega");
  if ((omega + omega.transpose()).norm() > tol) fail("omega is not antisymmetric");
  if (std::abs(omega.determinant()) < tol) fail("omega is degenerate");
  for (const auto& X : generators) {
    if (X.rows() != dim || X.cols() != dim) fail("generator has wrong shape");
    require_finite(X, "generator");
    if ((X.transpose() * omega + omega * X).norm() > tol * (1 + X.norm()))
      fail("generator is not infinitesimally symplectic");
  }
  if (static_cast<int>(structure.size()) != k()) fail("structure constants have wrong size");
  for (int a = 0; a < k(); ++a)
    for (int b = 0; b < k(); ++b) {
      Mat comm = generators[a] * generators[b] - generators[b] * generators[a];
      for (int c = 0; c < k(); ++c) comm -= structure[c](a, b) * generators[c];
      if (comm.norm() > tol * (1 + generators[a].norm() * generators[b].norm()))
        fail("commutators do not match structure constants");
    }
  if (kappa.rows() != k() || kappa.cols() != k()) fail("kappa has wrong shape");
  if (k() > 0) {
    if ((kappa - kappa.transpose()).norm() > tol) fail("kappa is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(kappa);
    if (es.eigenvalues().minCoeff() <= 0) fail("kappa is not positive definite");
  }
  if (group.dim() != dim) fail("group representation has wrong dimension");
  group.validate(tol);
  if (group.group.kind != GroupKind::Finite) {
    for (int a = 0; a < k(); ++a)
      if ((group.generators.at(a) - generators[a]).norm() > tol)
        fail("group generators differ from the algebra action");
  } else if (k() != 0) {
    fail("finite groups carry no algebra generators");
  } else {
    for (const auto& g : group.elements)
      if ((g.transpose() * omega * g - omega).norm() > tol * (1 + g.squaredNorm()))
        fail("group element does not preserve omega");
  }
}

std::vector<std::string> builtin_system_names() {
  return {"oscillator", "su2_c2", "torus2", "z2_reflection", "trivial"};
}

LinearSymplecticSystem builtin_system(const std::string& name) {
  LinearSymplecticSystem s;
  s.name = name;
  s.dim = 4;
  s.omega = canonical_omega(2);
  auto continuous = [&](CompactGroupSpec g) {
    s.group.group = g;
    s.group.generators = s.generators;
    s.kappa = Mat::Identity(s.k(), s.k());
    if (s.structure.empty()) s.structure.assign(s.k(), Mat::Zero(s.k(), s.k()));
  };
  if (name == "oscillator") {
    // Counterclockwise base rotation A, entering with a minus sign so that
    // ½ω(x, ξx) = q₁p₂ − q₂p₁.
    Mat A(2, 2);
    A << 0, -1, 1, 0;
    Mat X = Mat::Zero(4, 4);
    X.topLeftCorner(2, 2) = -A;
    X.bottomRightCorner(2, 2) = -A;
    s.generators = {X};
    continuous(CompactGroupSpec::torus(1));
  } else if (name == "su2_c2") {
    const cplx I(0, 1);
    CMat t1(2, 2), t2(2, 2), t3(2, 2);
    t1 << 0, I / 2.0, I / 2.0, 0;
    t2 << 0, 0.5, -0.5, 0;
    t3 << I / 2.0, 0, 0, -I / 2.0;
    s.generators = {realify(t1), realify(t2), realify(t3)};
    s.structure.assign(3, Mat::Zero(3, 3));
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s.structure[c](a, b) = -eps3(a, b, c);
    continuous(CompactGroupSpec::su2());
  } else if (name == "torus2") {
    const cplx I(0, 1);
    CMat d1 = CMat::Zero(2, 2), d2 = CMat::Zero(2, 2);
    d1(0, 0) = I;
    d2(1, 1) = I;
    s.generators = {realify(d1), realify(d2)};
    continuous(CompactGroupSpec::torus(2));
  } else if (name == "z2_reflection") {
    s.group.group = CompactGroupSpec::finite(2);
    Mat R = Vec((Vec(4) << 1, -1, 1, -1).finished()).asDiagonal();
    s.group.elements = {Mat::Identity(4, 4), R};
    s.kappa = Mat(0, 0);
  } else if (name == "trivial") {
    s.group = Representation::trivial(4);
    s.kappa = Mat(0, 0);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown builtin system '" + name + "'");
  }
  return s;
}

MomentumValue momentum(const LinearSymplecticSystem& sys, const Vec& x) {
  require_dim(x.size(), sys.dim, "phase-space point");
  MomentumValue J;
  J.pairings.resize(sys.k());
  for (int a = 0; a < sys.k(); ++a) J.pairings(a) = 0.5 * x.dot(sys.omega * (sys.generators[a] * x));
  J.components = sys.k() ? Vec(sys.kappa.ldlt().solve(J.pairings)) : Vec(0);
  return J;
}

Mat momentum_jacobian(const LinearSymplecticSystem& sys, const Vec& x) {
  require_dim(x.size(), sys.dim, "phase-space point");
  Mat D(sys.k(), sys.dim);
  for (int a = 0; a < sys.k(); ++a) {
    const Mat M = sys.omega * sys.generators[a];
    D.row(a) = (0.5 * (M + M.transpose()) * x).transpose();
  }
  return D;
}

double momentum_relation_check(const LinearSymplecticSystem& sys, const Vec& x,
                               const Mat& directions) {
  require_dim(directions.rows(), sys.dim, "directions");
  const Mat D = momentum_jacobian(sys, x);
  double d = 0;
  for (int a = 0; a < sys.k(); ++a) {
    const Vec xi_x = sys.generators[a] * x;
    for (Eigen::Index j = 0; j < directions.cols(); ++j) {
      const Vec v = directions.col(j);
      d = std::max(d, std::abs(xi_x.dot(sys.omega * v) + D.row(a).dot(v)));
    }
  }
  return d;
}

double momentum_equivariance_defect(const LinearSymplecticSystem& sys, const Vec& x) {
  if (sys.k() == 0) return 0;
  Mat G(sys.dim * sys.dim, sys.k());
  for (int b = 0; b < sys.k(); ++b)
    G.col(b) = Eigen::Map<const Vec>(sys.generators[b].data(), sys.dim * sys.dim);
  const auto Gqr = G.colPivHouseholderQr();
  const Vec J = momentum(sys, x).pairings;
  auto nodes = haar_nodes(sys.group.group);
  const std::size_t stride = std::max<std::size_t>(1, nodes.size() / 64);
  double d = 0;
  for (std::size_t i = 0; i < nodes.size(); i += stride) {
    const Mat g = sys.group.element(nodes[i].g);
    const Mat ginv = g.inverse();
    const Vec Jg = momentum(sys, g * x).pairings;
    for (int a = 0; a < sys.k(); ++a) {
      const Mat ad = ginv * sys.generators[a] * g;
      const Vec c = Gqr.solve(Eigen::Map<const Vec>(ad.data(), sys.dim * sys.dim));
      d = std::max(d, std::abs(Jg(a) - c.dot(J)));
    }
  }
  return d;
}

Mat symplectic_orthogonal(const LinearSymplecticSystem& sys, const Mat& V) {
  require_dim(V.rows(), sys.dim, "subspace basis");
  if (V.cols() == 0) return Mat::Identity(sys.dim, sys.dim);
  return null_space(Mat(V.transpose() * sys.omega));
}

Mat canonical_basis(const Mat& B, double tol) {
  const Mat Q = orth(B);
  const Eigen::Index n = B.rows(), d = Q.cols();
  Mat out(n, d);
  Eigen::Index got = 0;
  for (Eigen::Index i = 0; i < n && got < d; ++i) {
    Vec v = Q * Q.row(i).transpose();
    for (Eigen::Index j = 0; j < got; ++j) v -= out.col(j).dot(v) * out.col(j);
    for (Eigen::Index j = 0; j < got; ++j) v -= out.col(j).dot(v) * out.col(j);
    if (v.norm() > tol) out.col(got++) = v.normalized();
  }
  return out.leftCols(got);
}

FixedPointDecomposition fixed_point_decomposition(const LinearSymplecticSystem& sys) {
  FixedPointDecomposition d;
  Mat P = Mat::Zero(sys.dim, sys.dim);
  for (const auto& nd : haar_nodes(sys.group.group)) P += nd.weight * sys.group.element(nd.g);
  d.X_G = canonical_basis(P);
  d.complement = canonical_basis(symplectic_orthogonal(sys, d.X_G));
  Mat both(sys.dim, d.X_G.cols() + d.complement.cols());
  both << d.X_G, d.complement;
  if (both.cols() != sys.dim || linops::rank_factorize(both).rank != sys.dim)
    throw Error(ErrorCode::DegenerateRestriction, "X_G and its symplectic orthogonal do not split X");
  d.restricted_omega = d.X_G.transpose() * sys.omega * d.X_G;
  if (d.X_G.cols() > 0 &&
      linops::rank_factorize(d.restricted_omega).rank != d.restricted_omega.rows())
    throw Error(ErrorCode::DegenerateRestriction, "omega restricted to X_G is degenerate");
  return d;
}

Mat coadjoint_stabilizer(const LinearSymplecticSystem& sys, const Vec& m) {
  const int k = sys.k();
  if (k == 0) return Mat(0, 0);
  if (sys.abelian()) return Mat::Identity(k, k);
  const Vec mu = momentum(sys, m).pairings;
  // M(b, a) = ⟨μ, [ξ_a, ξ_b]⟩
  Mat M = Mat::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) M(b, a) += sys.structure[c](a, b) * mu(c);
  return null_abs(M, 1e-10 * std::max(1.0, mu.norm()));
}

BifurcationReport bifurcation_check(const LinearSymplecticSystem& sys, const Vec& m) {
  require_dim(m.size(), sys.dim, "phase-space point");
  BifurcationReport r;
  const Mat D = momentum_jacobian(sys, m);
  const double thr = 1e-10 * point_scale(m);
  r.ker_DJ = sys.k() ? null_abs(D, thr) : Mat(Mat::Identity(sys.dim, sys.dim));
  r.orbit = orbit_matrix(sys, m);
  r.stabilizer = null_abs(r.orbit, thr);
  r.g_mu = coadjoint_stabilizer(sys, m);
  r.g_mu_orbit = span_action(sys, r.g_mu, m);

  r.angle_ker = subspace_distance(r.ker_DJ, symplectic_orthogonal(sys, orth(r.orbit, 1e-10)));
  if (sys.k() > 0) {
    const Mat imD = orth(D, 1e-10);
    const Mat ann = orth_complement(r.stabilizer);
    r.angle_im = (imD.cols() == 0 && ann.cols() == 0) ? 0.0 : subspace_distance(imD, ann);
  }
  const Mat iso = intersect(r.ker_DJ, symplectic_orthogonal(sys, r.ker_DJ));
  const Mat gmu_m = orth(r.g_mu_orbit, 1e-10);
  r.angle_isotropic = (iso.cols() == 0 && gmu_m.cols() == 0) ? 0.0 : subspace_distance(iso, gmu_m);
  return r;
}

WittArtin witt_artin(const LinearSymplecticSystem& sys, const Vec& m) {
  require_dim(m.size(), sys.dim, "phase-space point");
  WittArtin w;
  const double thr = 1e-10 * point_scale(m);
  const Mat g_mu = coadjoint_stabilizer(sys, m);
  w.g_mu_m = canonical_basis(span_action(sys, g_mu, m));
  w.slice = canonical_basis(orth_complement(w.g_mu_m));
  const Mat D = momentum_jacobian(sys, m);
  const Mat ker = sys.k() ? null_abs(D, thr) : Mat(Mat::Identity(sys.dim, sys.dim));
  w.E = canonical_basis(intersect(w.slice, ker));

  Mat q;
  if (sys.k() == 0) {
    q = Mat(0, 0);
  } else if (g_mu.cols() == 0) {
    q = Mat::Identity(sys.k(), sys.k());
  } else {
    q = null_space(Mat(g_mu.transpose() * sys.kappa));
  }
  w.q_m = canonical_basis(span_action(sys, q, m));
  const Mat Pq = w.slice * (w.slice.transpose() * w.q_m);
  Mat EPq(sys.dim, w.E.cols() + Pq.cols());
  EPq << w.E, Pq;
  w.F = canonical_basis(intersect(w.slice, orth_complement(orth(EPq))));

  w.dim_q = w.q_m.cols();
  w.dim_g_mu = w.g_mu_m.cols();
  w.dim_E = w.E.cols();
  w.dim_F = w.F.cols();
  Mat all(sys.dim, w.dim_q + w.dim_g_mu + w.dim_E + w.dim_F);
  all << w.q_m, w.g_mu_m, w.E, w.F;
  w.spans = all.cols() == sys.dim && linops::rank_factorize(all).rank == sys.dim;

  const Mat wE = w.E.transpose() * sys.omega * w.E;
  w.E_symplectic = w.dim_E == 0 || linops::rank_factorize(wE).rank == w.dim_E;
  w.stabilizer_dim = null_abs(orbit_matrix(sys, m), thr).cols();
  w.parity_even = ((2 * w.stabilizer_dim - w.dim_E) % 2) == 0 && w.dim_E % 2 == 0;
  return w;
}

Vec MgsForm::J_sing(const Vec& e) const {
  Vec j(static_cast<Eigen::Index>(forms.size()));
  for (std::size_t a = 0; a < forms.size(); ++a) j(a) = e.dot(forms[a] * e);
  return j;
}

double MgsForm::scaling_defect(double alpha, const Vec& e) const {
  if (forms.empty()) return 0;
  const double denom = alpha * alpha * std::max(e.squaredNorm(), 1e-300);
  return (J_sing(alpha * e) - alpha * alpha * J_sing(e)).lpNorm<Eigen::Infinity>() / denom;
}

MgsForm mgs_at(const LinearSymplecticSystem& sys, const Vec& m) {
  const auto w = witt_artin(sys, m);
  MgsForm g;
  g.stabilizer = null_abs(orbit_matrix(sys, m), 1e-10 * point_scale(m));
  g.E = w.E;
  g.omega_E = g.E.transpose() * sys.omega * g.E;
  for (Eigen::Index j = 0; j < g.stabilizer.cols(); ++j) {
    const Mat X = combine(sys, g.stabilizer.col(j));
    const Mat XE = g.E.transpose() * X * g.E;
    g.generators_E.push_back(XE);
    g.forms.push_back(0.5 * g.omega_E * XE);
    if (g.E.cols() > 0)
      g.invariance_defect = std::max(
          g.invariance_defect, (X * g.E - g.E * XE).norm());
  }
  return g;
}

namespace {

struct Candidates {
  std::vector<GroupPoint> pts;
  std::vector<Mat> mats;
};

Candidates candidates(const LinearSymplecticSystem& sys) {
  Candidates c;
  for (const auto& nd : haar_nodes(sys.group.group)) {
    c.pts.push_back(nd.g);
    c.mats.push_back(sys.group.element(nd.g));
  }
  return c;
}

bool in_identity_component(const LinearSymplecticSystem& sys, const GroupPoint& g,
                           const Mat& stab) {
  const auto& spec = sys.group.group;
  const long h = stab.cols();
  switch (spec.kind) {
    case GroupKind::Finite: return g.index == 0;
    case GroupKind::Torus: {
      const int k = spec.rank;
      if (h == k) return true;
      const Mat Hb = h ? orth(stab) : Mat(k, 0);
      std::vector<int> n(k, -3);
      while (true) {
        Vec r = g.theta;
        for (int i = 0; i < k; ++i) r(i) -= 2 * std::numbers::pi * n[i];
        const Vec res = h ? Vec(r - Hb * (Hb.transpose() * r)) : r;
        if (res.norm() < 1e-8) return true;
        int i = 0;
        while (i < k && ++n[i] > 3) n[i++] = -3;
        if (i == k) break;
      }
      return false;
    }
    case GroupKind::SU2: {
      if (h == 3) return true;
      const double t = g.theta.norm();
      if (h == 0) return t < 1e-12;
      const Vec v = t > 0 ? Vec(std::sin(t / 2) * g.theta / t) : Vec(Vec::Zero(3));
      const Vec a = stab.col(0).normalized();
      return (v - v.dot(a) * a).norm() < 1e-9;
    }
  }
  return false;
}

OrbitLabel classify_with(const LinearSymplecticSystem& sys, const Candidates& c, const Vec& m,
                         Mat* stab_out, std::vector<std::size_t>* fixers_out) {
  const double thr = 1e-9 * point_scale(m);
  const Mat stab = sys.k() ? null_abs(orbit_matrix(sys, m), thr) : Mat(0, 0);
  OrbitLabel L;
  L.stabilizer_dim = stab.cols();
  long fix = 0, fix_id = 0;
  for (std::size_t i = 0; i < c.mats.size(); ++i) {
    if ((c.mats[i] * m - m).norm() > thr) continue;
    ++fix;
    if (fixers_out) fixers_out->push_back(i);
    if (in_identity_component(sys, c.pts[i], stab)) ++fix_id;
  }
  L.finite_order = fix_id > 0 ? fix / fix_id : fix;
  if (stab_out) *stab_out = stab;
  return L;
}

bool project_to_zero_level(const LinearSymplecticSystem& sys, Vec& x) {
  if (sys.k() == 0) return true;
  bool hit = false;
  for (int it = 0; it < 100; ++it) {
    const Vec J = momentum(sys, x).pairings;
    if (J.norm() < 1e-10) hit = true;
    const Mat Dp = linops::generalized_inverse(momentum_jacobian(sys, x)).S_mat;
    const Vec step = Dp * J;
    if (!step.allFinite()) return false;
    if (hit && step.norm() <= 1e-13 * (1.0 + x.norm())) break;
    x -= step;
  }
  if (x.norm() < 1e-9) x.setZero();
  return momentum(sys, x).pairings.norm() < 1e-10;
}

}  // namespace

OrbitLabel classify_stabilizer(const LinearSymplecticSystem& sys, const Vec& m) {
  require_dim(m.size(), sys.dim, "phase-space point");
  return classify_with(sys, candidates(sys), m, nullptr, nullptr);
}

std::vector<StratumRecord> reduce_zero_level(const LinearSymplecticSystem& sys, int n_samples,
                                             std::uint64_t seed) {
  if (sys.dim > 12) throw Error(ErrorCode::InvalidInput, "reduce_zero_level supports dim <= 12");
  if (n_samples < 1) throw Error(ErrorCode::InvalidInput, "n_samples must be positive");
  const auto cand = candidates(sys);

  std::vector<Mat> subs = {Mat(sys.dim, 0)};
  for (const auto& g : cand.mats) {
    const Mat F = null_abs(g - Mat::Identity(sys.dim, sys.dim), 1e-9);
    if (F.cols() == sys.dim || F.cols() == 0) continue;
    bool seen = false;
    for (const auto& s : subs)
      if (s.cols() == F.cols() && subspace_distance(s, F) < 1e-8) {
        seen = true;
        break;
      }
    if (!seen) subs.push_back(F);
  }

  Rng rng(seed);
  std::vector<Vec> seeds;
  for (int i = 0; i < n_samples; ++i) seeds.push_back(rng.normal_vec(sys.dim));
  const int per_sub = std::max(1, n_samples / 4);
  for (const auto& F : subs)
    for (int j = 0; j < per_sub; ++j) {
      const Vec x = rng.normal_vec(sys.dim);
      seeds.push_back(F.cols() ? Vec(F * (F.transpose() * x)) : Vec(Vec::Zero(sys.dim)));
    }

  std::map<OrbitLabel, StratumRecord> strata;
  for (Vec x : seeds) {
    if (!project_to_zero_level(sys, x)) continue;
    const OrbitLabel L = classify_with(sys, cand, x, nullptr, nullptr);
    auto& rec = strata[L];
    rec.label = L;
    rec.sample_points.push_back(x);
  }
  if (strata.empty()) throw Error(ErrorCode::NoSamplesFound, "Newton projection failed for all seeds");

  std::vector<StratumRecord> out;
  for (auto& [L, rec] : strata) {
    const Vec& m = rec.sample_points.front();
    Mat stab;
    std::vector<std::size_t> fixers;
    classify_with(sys, cand, m, &stab, &fixers);
    const auto w = witt_artin(sys, m);

    std::vector<Mat> rows;
    for (Eigen::Index j = 0; j < stab.cols(); ++j) rows.push_back(combine(sys, stab.col(j)));
    const std::size_t cap = std::min<std::size_t>(fixers.size(), 256);
    for (std::size_t i = 0; i < cap; ++i)
      rows.push_back(cand.mats[fixers[i]] - Mat::Identity(sys.dim, sys.dim));
    Mat stack(static_cast<Eigen::Index>(rows.size()) * sys.dim, sys.dim);
    for (std::size_t i = 0; i < rows.size(); ++i) stack.middleRows(i * sys.dim, sys.dim) = rows[i];
    const Mat fixed = rows.empty() ? Mat(Mat::Identity(sys.dim, sys.dim)) : null_abs(stack, 1e-9);
    rec.fixed_subspace_basis = canonical_basis(intersect(w.E, fixed));
    rec.reduced_form = rec.fixed_subspace_basis.transpose() * sys.omega * rec.fixed_subspace_basis;
    rec.reduced_invertible = rec.reduced_form.rows() == 0 ||
                             linops::rank_factorize(rec.reduced_form).rank == rec.reduced_form.rows();
    if (!rec.reduced_invertible)
      throw Error(ErrorCode::DegenerateRestriction, "reduced form on a stratum is degenerate");
    out.push_back(std::move(rec));
  }
  return out;
}

MomentumValue cotangent_lift_momentum(const std::vector<Mat>& base_generators, const Vec& x,
                                      const Vec& alpha) {
  require_dim(alpha.size(), x.size(), "covector");
  MomentumValue J;
  J.pairings.resize(static_cast<Eigen::Index>(base_generators.size()));
  for (std::size_t a = 0; a < base_generators.size(); ++a) {
    require_dim(base_generators[a].cols(), x.size(), "base generator");
    J.pairings(a) = alpha.dot(base_generators[a] * x);
  }
  J.components = J.pairings;
  return J;
}

}  // namespace geomred::symred
