#include "geomred/lsreduce.hpp"

#include "geomred/sampling.hpp"

#include <cmath>
#include <map>

namespace geomred::lsreduce {

using linops::opnorm;

Vec SmoothMapHandle::operator()(const Vec& x) const {
  require_dim(x.size(), dim_in, "map argument");
  Vec y = eval(x);
  require_dim(y.size(), dim_out, "map value");
  return y;
}

Mat SmoothMapHandle::fd_jacobian(const Vec& x) const {
  const double h = fd_step * (1.0 + x.norm());
  Mat J(dim_out, dim_in);
  Vec xp = x, xm = x;
  for (int i = 0; i < dim_in; ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    J.col(i) = ((*this)(xp) - (*this)(xm)) / (2 * h);
    xp(i) = xm(i) = x(i);
  }
  return J;
}

Mat SmoothMapHandle::jac(const Vec& x) const {
  if (jacobian) {
    Mat J = jacobian(x);
    if (J.rows() != dim_out || J.cols() != dim_in)
      throw Error(ErrorCode::ShapeMismatch, "jacobian has wrong shape");
    return J;
  }
  return fd_jacobian(x);
}

double jacobian_fd_check(const SmoothMapHandle& f, const Vec& x) {
  const Mat fd = f.fd_jacobian(x);
  const Mat an = f.jac(x);
  return (an - fd).norm() / (1.0 + an.norm());
}

SmoothMapHandle polynomial_map(int dim_in, const std::vector<std::vector<PolyTerm>>& comps) {
  for (const auto& c : comps)
    for (const auto& t : c)
      if (static_cast<int>(t.powers.size()) != dim_in || !std::isfinite(t.coef))
        throw Error(ErrorCode::InvalidInput, "polynomial term has wrong arity");
  SmoothMapHandle f;
  f.dim_in = dim_in;
  f.dim_out = static_cast<int>(comps.size());
  auto mono = [](const Vec& x, const std::vector<int>& pw, int skip) {
    double v = 1;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      int p = pw[i] - (static_cast<int>(i) == skip ? 1 : 0);
      for (int k = 0; k < p; ++k) v *= x(i);
    }
    return v;
  };
  f.eval = [comps, mono](const Vec& x) {
    Vec y = Vec::Zero(static_cast<Eigen::Index>(comps.size()));
    for (std::size_t j = 0; j < comps.size(); ++j)
      for (const auto& t : comps[j]) y(j) += t.coef * mono(x, t.powers, -1);
    return y;
  };
  f.jacobian = [comps, mono, dim_in](const Vec& x) {
    Mat J = Mat::Zero(static_cast<Eigen::Index>(comps.size()), dim_in);
    for (std::size_t j = 0; j < comps.size(); ++j)
      for (const auto& t : comps[j])
        for (int i = 0; i < dim_in; ++i)
          if (t.powers[i] > 0) J(j, i) += t.coef * t.powers[i] * mono(x, t.powers, i);
    return J;
  };
  return f;
}

std::vector<std::string> builtin_map_names() {
  return {"circle", "angular_momentum", "odd_cubic", "radial", "projection", "square"};
}

SmoothMapHandle builtin_map(const std::string& name) {
  SmoothMapHandle f;
  if (name == "circle") {
    f.dim_in = 1;
    f.dim_out = 2;
    f.eval = [](const Vec& x) { return Vec((Vec(2) << std::cos(x(0)), std::sin(x(0))).finished()); };
    f.jacobian = [](const Vec& x) {
      return Mat((Mat(2, 1) << -std::sin(x(0)), std::cos(x(0))).finished());
    };
  } else if (name == "angular_momentum") {
    f.dim_in = 4;
    f.dim_out = 1;
    f.eval = [](const Vec& x) { return Vec::Constant(1, x(0) * x(3) - x(1) * x(2)); };
    f.jacobian = [](const Vec& x) {
      return Mat((Mat(1, 4) << x(3), -x(2), -x(1), x(0)).finished());
    };
  } else if (name == "odd_cubic") {
    f.dim_in = 2;
    f.dim_out = 2;
    f.eval = [](const Vec& x) {
      const double a = x(0), b = x(1);
      return Vec((Vec(2) << a * a * a - a * b * b, b + b * b * b).finished());
    };
    f.jacobian = [](const Vec& x) {
      const double a = x(0), b = x(1);
      return Mat((Mat(2, 2) << 3 * a * a - b * b, -2 * a * b, 0.0, 1 + 3 * b * b).finished());
    };
  } else if (name == "radial") {
    f.dim_in = 2;
    f.dim_out = 2;
    f.eval = [](const Vec& x) { return Vec(x.squaredNorm() * x); };
    f.jacobian = [](const Vec& x) {
      return Mat(x.squaredNorm() * Mat::Identity(2, 2) + 2.0 * x * x.transpose());
    };
  } else if (name == "projection") {
    f.dim_in = 2;
    f.dim_out = 1;
    f.eval = [](const Vec& x) { return Vec::Constant(1, x(0)); };
    f.jacobian = [](const Vec&) { return Mat((Mat(1, 2) << 1.0, 0.0).finished()); };
  } else if (name == "square") {
    f.dim_in = 1;
    f.dim_out = 1;
    f.eval = [](const Vec& x) { return Vec::Constant(1, x(0) * x(0)); };
    f.jacobian = [](const Vec& x) { return Mat::Constant(1, 1, 2 * x(0)); };
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown builtin map '" + name + "'");
  }
  return f;
}

// ---------------------------------------------------------------------------

Vec NormalFormCharts::psi(const Vec& x) const {
  return pr_ker * x + S * (f(base + x) - f_base);
}

Mat NormalFormCharts::dpsi(const Vec& x) const { return pr_ker + S * f.jac(base + x); }

bool NormalFormCharts::try_psi_inv(const Vec& z, Vec& x) const {
  constexpr int kMaxIter = 50, kMaxHalvings = 30;
  const double scale = 1.0 + z.norm();
  x = z;
  Vec r = psi(x) - z;
  double nr = r.norm();
  for (int it = 0; it < kMaxIter && nr > 1e-14 * scale; ++it) {
    Eigen::FullPivLU<Mat> lu(dpsi(x));
    if (!lu.isInvertible()) break;
    const Vec dx = lu.solve(r);
    if (!dx.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxHalvings; ++k, t *= 0.5) {
      const Vec xn = x - t * dx;
      const Vec rn = psi(xn) - z;
      if (rn.allFinite() && rn.norm() < nr) {
        x = xn;
        r = rn;
        nr = rn.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return nr <= 1e-11 * scale;
}

Vec NormalFormCharts::psi_inv(const Vec& z) const {
  Vec x;
  if (!try_psi_inv(z, x)) throw Error(ErrorCode::NewtonDivergence, "psi inverse did not converge");
  return x;
}

Vec NormalFormCharts::phi(const Vec& y) const {
  const Vec x = psi_inv(S * y);
  return y + pr_coker * f(base + x) + pr_im * f_base;
}

Vec NormalFormCharts::f_sing(const Vec& z) const {
  const Vec x = psi_inv(z);
  const Vec x2 = psi_inv(pr_coim * z);
  return pr_coker * (f(base + x) - f(base + x2));
}

Vec NormalFormCharts::reduced(const Vec& c) const {
  return coker_basis.transpose() * f_sing(ker_basis * c);
}

Mat NormalFormCharts::reduced_jacobian(const Vec& c) const {
  const double h = f.fd_step * (1.0 + c.norm());
  Mat J(dim_coker(), c.size());
  Vec cp = c, cm = c;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    cp(i) = c(i) + h;
    cm(i) = c(i) - h;
    J.col(i) = (reduced(cp) - reduced(cm)) / (2 * h);
    cp(i) = cm(i) = c(i);
  }
  return J;
}

namespace {

// Check roundtrip and diagram at `samples` box points; returns false on any failure.
bool validate_box(NormalFormCharts& nf, double r, const BuildOptions& opt) {
  Halton seq(nf.f.dim_in, opt.seed);
  ValidationStats st;
  for (int i = 0; i < opt.samples; ++i) {
    const Vec x = seq.next_in_box(r);
    const Vec fx = nf.f(nf.base + x);
    const Vec z = nf.psi(x);
    Vec xb;
    if (!z.allFinite() || !nf.try_psi_inv(z, xb)) return false;
    const double rt = (xb - x).norm();
    if (rt > 1e-9 * (1.0 + x.norm())) return false;
    Vec y;
    try {
      y = nf.phi(nf.f_nf(z));
    } catch (const Error&) {
      return false;
    }
    const double dr = (y - fx).norm() / (1.0 + fx.norm());
    if (!(dr <= nf.tol.residual_tol)) return false;
    st.roundtrip_error = std::max(st.roundtrip_error, rt);
    st.diagram_residual = std::max(st.diagram_residual, dr);
    ++st.samples;
  }
  nf.stats = st;
  return true;
}

NormalFormCharts assemble(const SmoothMapHandle& f, const Vec& m, const TolerancePolicy& tol,
                          const Mat* P_ker, const Mat* P_im, const BuildOptions& opt) {
  tol.validate();
  require_dim(m.size(), f.dim_in, "base point");
  require_finite(m, "base point");
  NormalFormCharts nf;
  nf.f = f;
  nf.tol = tol;
  nf.base = m;
  nf.f_base = f(m);
  require_finite(nf.f_base, "f(base)");
  nf.T = f.jac(m);
  require_finite(nf.T, "Df(base)");
  nf.fact = linops::rank_factorize(nf.T, tol);
  const Eigen::Index n = f.dim_in, mm = f.dim_out;
  nf.pr_ker = P_ker ? *P_ker : nf.fact.pr_ker();
  nf.pr_im = P_im ? *P_im : nf.fact.pr_im();
  nf.pr_coim = Mat::Identity(n, n) - nf.pr_ker;
  nf.pr_coker = Mat::Identity(mm, mm) - nf.pr_im;
  const Mat Tplus = linops::generalized_inverse_from(nf.fact);
  nf.S = nf.pr_coim * Tplus * nf.pr_im;
  nf.ker_basis = nf.fact.ker_basis;
  nf.coker_basis = P_im ? Mat(linops::orth(nf.pr_coker)) : nf.fact.coker_basis;
  if (nf.coker_basis.cols() != nf.fact.coker_basis.cols())
    throw Error(ErrorCode::NotEquivariant, "averaged projection changed the cokernel dimension");

  for (double r = opt.start_radius; r >= opt.min_radius; r *= 0.5) {
    if (validate_box(nf, r, opt)) {
      nf.box_radius = r;
      return nf;
    }
  }
  throw Error(ErrorCode::NewtonDivergence,
              "normal form could not be validated on any box above the minimum radius");
}

}  // namespace

NormalFormCharts build_normal_form(const SmoothMapHandle& f, const Vec& m,
                                   const TolerancePolicy& tol, const BuildOptions& opt) {
  return assemble(f, m, tol, nullptr, nullptr, opt);
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::SUBMERSION: return "SUBMERSION";
    case PointClass::IMMERSION: return "IMMERSION";
    case PointClass::SUBIMMERSION: return "SUBIMMERSION";
    case PointClass::SINGULAR: return "SINGULAR";
  }
  return "?";
}

RankCensus rank_census(const NormalFormCharts& nf, int samples, std::uint64_t seed) {
  RankCensus rc;
  Halton seq(nf.f.dim_in, seed + 1);
  TolerancePolicy t = nf.tol;
  if (!nf.f.analytic()) t.rank_tol = std::max(t.rank_tol, 1e-7);
  for (int i = 0; i < samples; ++i) {
    const Vec x = seq.next_in_box(nf.box_radius);
    rc.ranks.push_back(linops::rank_factorize(nf.f.jac(nf.base + x), t).rank);
    rc.max_f_sing = std::max(rc.max_f_sing, nf.f_sing(nf.psi(x)).norm());
  }
  return rc;
}

PointClass classify_point(const NormalFormCharts& nf, std::uint64_t seed) {
  if (nf.rank() == nf.f.dim_out) return PointClass::SUBMERSION;
  if (nf.rank() == nf.f.dim_in) return PointClass::IMMERSION;
  const auto rc = rank_census(nf, 64, seed);
  bool constant = true;
  for (long r : rc.ranks) constant = constant && r == nf.rank();
  return constant && rc.max_f_sing < nf.tol.residual_tol ? PointClass::SUBIMMERSION
                                                          : PointClass::SINGULAR;
}

PointClass classify_point(const SmoothMapHandle& f, const Vec& m, const TolerancePolicy& tol,
                          std::uint64_t seed) {
  BuildOptions o;
  o.seed = seed;
  return classify_point(build_normal_form(f, m, tol, o), seed);
}

ReducedSolution reduced_equation_solve(const NormalFormCharts& nf, int grid_res) {
  const Eigen::Index k = nf.dim_ker();
  if (k > 4) throw Error(ErrorCode::KerTooLarge, "reduced equation grid needs dim Ker <= 4");
  if (grid_res < 2) throw Error(ErrorCode::InvalidInput, "grid_res must be at least 2");
  ReducedSolution sol;
  const double r = 0.5 * nf.box_radius;
  sol.spacing = 2 * r / (grid_res - 1);
  long total = 1;
  for (Eigen::Index i = 0; i < k; ++i) total *= grid_res;
  sol.grid_points = total;
  const double tol = nf.tol.residual_tol;

  for (long idx = 0; idx < total; ++idx) {
    Vec c(k);
    long q = idx;
    for (Eigen::Index i = 0; i < k; ++i) {
      c(i) = -r + sol.spacing * static_cast<double>(q % grid_res);
      q /= grid_res;
    }
    bool ok = false;
    try {
      Vec s = nf.reduced(c);
      for (int it = 0; it < 80 && s.norm() >= tol; ++it) {
        const Mat J = nf.reduced_jacobian(c);
        const Mat Jp = linops::generalized_inverse(J, nf.tol).S_mat;
        const Vec step = Jp * s;
        if (step.norm() == 0 || !step.allFinite()) break;
        c -= step;
        if (c.lpNorm<Eigen::Infinity>() > 1.5 * r) break;
        s = nf.reduced(c);
      }
      ok = s.norm() < tol && c.lpNorm<Eigen::Infinity>() <= 1.5 * r;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& e : sol.coords)
      if ((e - c).norm() < 0.25 * sol.spacing) {
        dup = true;
        break;
      }
    if (dup) continue;
    sol.coords.push_back(c);
    sol.points.push_back(nf.ker_basis * c);
  }
  return sol;
}

namespace {

std::vector<HaarNode> node_subset(const CompactGroupSpec& g, std::size_t max_nodes) {
  auto nodes = haar_nodes(g);
  if (nodes.size() <= max_nodes) return nodes;
  std::vector<HaarNode> out;
  const std::size_t stride = (nodes.size() + max_nodes - 1) / max_nodes;
  for (std::size_t i = 0; i < nodes.size(); i += stride) out.push_back(nodes[i]);
  return out;
}

}  // namespace

NormalFormCharts equivariant_normal_form(const SmoothMapHandle& f, const Vec& m,
                                         const GroupActionPair& H, const TolerancePolicy& tol,
                                         const BuildOptions& opt) {
  require_dim(H.domain.dim(), f.dim_in, "domain representation");
  require_dim(H.codomain.dim(), f.dim_out, "codomain representation");
  H.domain.validate(tol.residual_tol);
  H.codomain.validate(tol.residual_tol);

  const auto nodes = node_subset(H.domain.group, 64);
  Halton seq(f.dim_in, opt.seed + 7);
  double defect = 0;
  for (const auto& nd : nodes) {
    const Mat hd = H.domain.element(nd.g), hc = H.codomain.element(nd.g);
    if ((hd * m - m).norm() > tol.residual_tol * (1.0 + m.norm()))
      throw Error(ErrorCode::NotEquivariant, "base point is not fixed by the group");
    for (int i = 0; i < 16; ++i) {
      const Vec x = seq.next_in_box(0.5);
      const Vec fx = f(m + x);
      defect = std::max(defect, (f(m + hd * x) - hc * fx).norm() / (1.0 + fx.norm()));
    }
  }
  if (defect > tol.residual_tol)
    throw Error(ErrorCode::NotEquivariant, "map is not equivariant under the given actions");

  const Mat T = f.jac(m);
  const auto fact = linops::rank_factorize(T, tol);
  const Mat Pk = haar_conjugate_average(H.domain, H.domain, fact.pr_ker());
  const Mat Pi = haar_conjugate_average(H.codomain, H.codomain, fact.pr_im());
  auto nf = assemble(f, m, tol, &Pk, &Pi, opt);
  nf.stats.equivariance_defect = f_sing_equivariance_defect(nf, H, 32, opt.seed);
  return nf;
}

double f_sing_equivariance_defect(const NormalFormCharts& nf, const GroupActionPair& H,
                                  int samples, std::uint64_t seed) {
  const auto nodes = node_subset(H.domain.group, 64);
  Halton seq(nf.f.dim_in, seed + 11);
  std::vector<Vec> zs;
  for (int i = 0; i < samples; ++i) zs.push_back(nf.psi(seq.next_in_box(0.5 * nf.box_radius)));
  double d = 0;
  for (const auto& nd : nodes) {
    const Mat hd = H.domain.element(nd.g), hc = H.codomain.element(nd.g);
    for (const auto& z : zs) d = std::max(d, (nf.f_sing(hd * z) - hc * nf.f_sing(z)).norm());
  }
  return d;
}

KuranishiChartFD kuranishi_chart(const SmoothMapHandle& f, const Vec& m, const GroupActionPair& H,
                                 const TolerancePolicy& tol, const BuildOptions& opt,
                                 int level_samples) {
  KuranishiChartFD ch;
  ch.nf = equivariant_normal_form(f, m, H, tol, opt);
  ch.H = H.domain.group;
  ch.V_basis = ch.nf.ker_basis;
  ch.F_basis = ch.nf.coker_basis;
  ch.V_radius = ch.nf.box_radius;
  ch.s_at_zero = ch.nf.reduced(Vec::Zero(ch.nf.dim_ker())).norm();
  ch.virtual_dim = virtual_dimension(ch.nf.dim_ker(), ch.nf.dim_coker(), ch.H.algebra_dim());

  // s restricted to Ker under the group
  {
    const auto nodes = node_subset(ch.H, 64);
    Halton seq(std::max<int>(1, static_cast<int>(ch.nf.dim_ker())), opt.seed + 13);
    double d = 0;
    for (int i = 0; i < 16 && ch.nf.dim_ker() > 0; ++i) {
      const Vec z = ch.V_basis * seq.next_in_box(0.5 * ch.V_radius).head(ch.nf.dim_ker());
      for (const auto& nd : nodes) {
        const Mat hd = H.domain.element(nd.g), hc = H.codomain.element(nd.g);
        d = std::max(d, (ch.nf.f_sing(hd * z) - hc * ch.nf.f_sing(z)).norm());
      }
    }
    ch.s_equivariance_defect = d;
  }

  // level-set samples of f, projected by Gauss–Newton
  Halton seq(f.dim_in, opt.seed + 17);
  for (int i = 0; i < level_samples; ++i) {
    Vec y = m + seq.next_in_box(0.5 * ch.V_radius);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Vec r = f(y) - ch.nf.f_base;
      if (r.norm() < 0.01 * tol.residual_tol) {
        ok = true;
        break;
      }
      const Mat Jp = linops::generalized_inverse(f.jac(y), tol).S_mat;
      const Vec step = Jp * r;
      if (!step.allFinite() || step.norm() == 0) break;
      y -= step;
    }
    if (!ok || (y - m).lpNorm<Eigen::Infinity>() > ch.V_radius) continue;
    Vec z;
    if (!ch.nf.try_psi_inv(ch.nf.psi(y - m), z)) continue;
    const Vec w = ch.nf.psi(y - m);
    ch.coim_defect = std::max(ch.coim_defect, (ch.nf.pr_coim * w).norm());
    ch.s_defect =
        std::max(ch.s_defect, ch.nf.reduced(ch.V_basis.transpose() * (ch.nf.pr_ker * w)).norm());
    ch.chart_points.push_back(y);
  }
  return ch;
}

}  // namespace geomred::lsreduce
