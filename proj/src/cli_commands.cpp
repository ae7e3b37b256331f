#include "geomred/cli.hpp"
#include "geomred/cotred.hpp"
#include "geomred/gaugealg.hpp"
#include "geomred/linops.hpp"
#include "geomred/lsreduce.hpp"
#include "geomred/sampling.hpp"
#include "geomred/svg.hpp"
#include "geomred/symred.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace geomred::cli {

using io::json;
using io::to_json;
using std::numbers::pi;

namespace {

template <class T>
T get(const json& in, const char* key, T fallback) {
  return in.contains(key) ? in.at(key).get<T>() : fallback;
}

json header(const std::string& cmd, const RunConfig& cfg) {
  return {{"schema", 1}, {"command", cmd}, {"seed", cfg.seed}};
}

TolerancePolicy tolerances(const json& in, const RunConfig& cfg) {
  TolerancePolicy t;
  t.rank_tol = get(in, "rank_tol", t.rank_tol);
  if (cfg.tol) t.residual_tol = *cfg.tol;
  t.validate();
  return t;
}

Vec base_point(const json& in, int dim) {
  if (!in.contains("base")) return Vec::Zero(dim);
  Vec b = io::vec_from_json(in.at("base"), "base");
  require_dim(b.size(), dim, "base point");
  return b;
}

// ---------------------------------------------------------------------------

Outputs cmd_ginv(const json& in, const RunConfig& cfg) {
  const TolerancePolicy tol = tolerances(in, cfg);
  Mat T;
  if (in.contains("matrix")) {
    T = io::mat_from_json(in.at("matrix"), "matrix");
  } else {
    Rng rng(cfg.seed);
    T = rng.normal_mat(6, 3) * rng.normal_mat(3, 4);
  }
  if (T.size() == 0) throw Error(ErrorCode::ShapeMismatch, "matrix is empty");
  require_finite(T, "matrix");
  const auto f = linops::rank_factorize(T, tol);
  const auto g = linops::generalized_inverse(T, tol);
  Mat T_pm = Mat::Zero(f.ker_basis.cols(), f.coker_basis.cols());
  if (in.contains("T_pm")) {
    T_pm = io::mat_from_json(in.at("T_pm"), "T_pm");
    if (T_pm.rows() != f.ker_basis.cols() || T_pm.cols() != f.coker_basis.cols())
      throw Error(ErrorCode::ShapeMismatch, "T_pm must be dim Ker x dim Coker");
  }
  const auto e = linops::extend_block_with<double>(T, f, T_pm, tol);

  json r = header("ginv", cfg);
  r["rows"] = T.rows();
  r["cols"] = T.cols();
  r["rank"] = f.rank;
  r["sigma_max"] = f.sigma_max;
  r["core_condition"] = f.core_condition;
  r["dim_ker"] = f.ker_basis.cols();
  r["dim_coker"] = f.coker_basis.cols();
  r["index"] = static_cast<long>(f.ker_basis.cols()) - static_cast<long>(f.coker_basis.cols());
  r["generalized_inverse"] = to_json(g.S_mat);
  r["tst_residual"] = g.tst_residual;
  r["sts_residual"] = g.sts_residual;
  r["reflexive"] = g.reflexive;
  r["extended"] = {{"lower_right_norm", e.lower_right_norm},
                   {"S_matches", (e.S_mat - g.S_mat).cwiseAbs().maxCoeff()}};
  return {{"ginv.json", io::dump(r)}};
}

Outputs cmd_bvp(const json& in, const RunConfig& cfg) {
  std::vector<int> ns = get(in, "n", std::vector<int>{64, 128, 256});
  if (ns.empty()) throw Error(ErrorCode::InvalidInput, "n must not be empty");
  json r = header("bvp", cfg), rows = json::array();
  std::vector<linops::BvpErrors> errs;
  for (int n : ns) {
    const auto e = linops::bvp_errors(linops::bvp_green(n));
    errs.push_back(e);
    rows.push_back({{"n", e.n}, {"h", e.h}, {"err_a", e.err_a}, {"err_a_composite", e.err_a_composite},
                    {"err_b", e.err_b}, {"err_a_over_h2", e.err_a / (e.h * e.h)},
                    {"err_b_over_h2", e.err_b / (e.h * e.h)}, {"s_of_one", e.s_of_one},
                    {"closed_form", e.closed_form}});
  }
  json ratios = json::array();
  for (std::size_t i = 1; i < errs.size(); ++i)
    ratios.push_back({{"n", errs[i].n}, {"ratio_a", errs[i - 1].err_a / errs[i].err_a},
                      {"ratio_b", errs[i - 1].err_b / errs[i].err_b},
                      {"ratio_a_composite", errs[i - 1].err_a_composite / errs[i].err_a_composite}});
  r["grids"] = rows;
  r["ratios"] = ratios;
  Outputs out = {{"bvp.json", io::dump(r)}};
  if (cfg.plot) {
    double lo = 0, hi = -30;
    for (const auto& e : errs) {
      lo = std::min({lo, std::log2(e.err_a), std::log2(e.err_b)});
      hi = std::max({hi, std::log2(e.err_a), std::log2(e.err_b)});
    }
    const double hx0 = std::log2(errs.back().h) - 0.5, hx1 = std::log2(errs.front().h) + 0.5;
    svg::Canvas c(480, 360, hx0, hx1, lo - 1, hi + 1);
    std::vector<std::pair<double, double>> a, b;
    for (const auto& e : errs) {
      a.push_back({std::log2(e.h), std::log2(e.err_a)});
      b.push_back({std::log2(e.h), std::log2(e.err_b)});
    }
    c.polyline(a, "#1f77b4", 2);
    c.polyline(b, "#d62728", 2);
    c.text(hx0 + 0.1, hi + 0.5, "log2 error vs log2 h (blue: S(u''), red: T(S f))");
    out.push_back({"bvp.svg", c.str()});
  }
  return out;
}

Outputs cmd_family(const json& in, const RunConfig& cfg) {
  const TolerancePolicy tol = tolerances(in, cfg);
  const std::string kind = get<std::string>(in, "kind", "dilation");
  linops::OperatorFamily F;
  if (kind == "dilation") {
    const int degree = get(in, "degree", 10);
    if (degree < 1) throw Error(ErrorCode::InvalidInput, "degree must be positive");
    std::vector<double> grid;
    for (int n = 1; n <= degree; ++n) grid.push_back(1.0 / n);
    F = linops::dilation_family(degree, get(in, "grid", grid));
  } else if (kind == "linear") {
    if (!in.contains("F0") || !in.contains("F1"))
      throw Error(ErrorCode::InvalidInput, "linear family needs F0 and F1");
    const Mat F0 = io::mat_from_json(in.at("F0"), "F0"), F1 = io::mat_from_json(in.at("F1"), "F1");
    if (F0.rows() != F1.rows() || F0.cols() != F1.cols())
      throw Error(ErrorCode::ShapeMismatch, "F0 and F1 must have equal shapes");
    F.param_dim = 1;
    F.base = Vec::Zero(1);
    F.eval = [F0, F1](const Vec& p) { return Mat(F0 + p(0) * F1); };
    for (double p : get(in, "grid", std::vector<double>{-0.1, -0.01, 0.01, 0.1}))
      F.grid.push_back(Vec::Constant(1, p));
  } else {
    throw Error(ErrorCode::InvalidInput, "kind must be dilation or linear");
  }
  const auto rep = linops::family_uniform_regular(F, tol);
  const auto idx = linops::index_stability(F, tol);
  json r = header("family", cfg), pts = json::array();
  r["kind"] = kind;
  r["uniformly_regular"] = rep.uniformly_regular;
  r["semicontinuous"] = rep.semicontinuous;
  r["base_rank"] = rep.base_rank;
  for (const auto& p : rep.points)
    pts.push_back({{"param", to_json(p.param)}, {"tilde_invertible", p.tilde_invertible},
                   {"core_condition", p.core_condition}, {"ker_contained", p.ker_contained},
                   {"im_contains", p.im_contains}, {"ker_angle", p.ker_angle}, {"im_angle", p.im_angle},
                   {"tilde_kernel", to_json(p.tilde_kernel)}, {"kernel_residual", p.kernel_residual}});
  r["points"] = pts;
  r["index"] = {{"base", idx.base_index}, {"values", idx.indices}, {"stable", idx.stable}};
  return {{"family.json", io::dump(r)}};
}

json nf_summary(const lsreduce::NormalFormCharts& nf) {
  return {{"rank", nf.rank()},
          {"dim_ker", nf.dim_ker()},
          {"dim_coker", nf.dim_coker()},
          {"box_radius", nf.box_radius},
          {"T", to_json(nf.T)},
          {"S", to_json(nf.S)},
          {"validation",
           {{"samples", nf.stats.samples},
            {"diagram_residual", nf.stats.diagram_residual},
            {"roundtrip_error", nf.stats.roundtrip_error},
            {"equivariance_defect", nf.stats.equivariance_defect}}}};
}

lsreduce::BuildOptions build_options(const json& in, const RunConfig& cfg) {
  lsreduce::BuildOptions o;
  o.seed = cfg.seed;
  o.samples = get(in, "samples", o.samples);
  if (o.samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  return o;
}

Outputs cmd_nf(const json& in, const RunConfig& cfg) {
  const auto f = lsreduce::builtin_map(get<std::string>(in, "map", "circle"));
  const Vec m = base_point(in, f.dim_in);
  const auto nf = lsreduce::build_normal_form(f, m, tolerances(in, cfg), build_options(in, cfg));
  json r = header("nf", cfg);
  r["map"] = get<std::string>(in, "map", "circle");
  r["base"] = to_json(m);
  r["class"] = lsreduce::to_string(lsreduce::classify_point(nf, cfg.seed));
  r["normal_form"] = nf_summary(nf);
  const int grid = get(in, "grid", 0);
  if (grid > 0 && nf.dim_ker() > 0) {
    const auto sol = lsreduce::reduced_equation_solve(nf, grid);
    json pts = json::array();
    for (const auto& p : sol.points) pts.push_back(to_json(Vec(m + p)));
    r["reduced_solutions"] = {{"grid_points", sol.grid_points}, {"spacing", sol.spacing}, {"points", pts}};
  }
  return {{"nf.json", io::dump(r)}};
}

lsreduce::GroupActionPair action_pair(const std::string& name, int din, int dout) {
  auto rotation = [](int d) {
    if (d % 2) throw Error(ErrorCode::InvalidInput, "rotation group needs even dimensions or a scalar target");
    Mat J = Mat::Zero(d, d);
    for (int i = 0; i < d; i += 2) {
      J(i + 1, i) = 1;
      J(i, i + 1) = -1;
    }
    return J;
  };
  lsreduce::GroupActionPair H;
  if (name == "trivial") {
    H.domain = Representation::trivial(din);
    H.codomain = Representation::trivial(dout);
  } else if (name == "z2_antipodal") {
    for (auto* R : {&H.domain, &H.codomain}) R->group = CompactGroupSpec::finite(2);
    H.domain.elements = {Mat::Identity(din, din), -Mat::Identity(din, din)};
    H.codomain.elements = {Mat::Identity(dout, dout), -Mat::Identity(dout, dout)};
  } else if (name == "rotation") {
    for (auto* R : {&H.domain, &H.codomain}) R->group = CompactGroupSpec::torus(1);
    H.domain.generators = {rotation(din)};
    H.codomain.generators = {dout == 1 ? Mat::Zero(1, 1) : rotation(dout)};
  } else {
    throw Error(ErrorCode::InvalidInput, "group must be trivial, z2_antipodal or rotation");
  }
  return H;
}

Outputs cmd_kuranishi(const json& in, const RunConfig& cfg) {
  const std::string map = get<std::string>(in, "map", "odd_cubic");
  const std::string group = get<std::string>(in, "group", "z2_antipodal");
  const auto f = lsreduce::builtin_map(map);
  const Vec m = base_point(in, f.dim_in);
  const auto H = action_pair(group, f.dim_in, f.dim_out);
  const int level = get(in, "level_samples", 64);
  if (level < 1) throw Error(ErrorCode::InvalidInput, "level_samples must be positive");
  const auto k = lsreduce::kuranishi_chart(f, m, H, tolerances(in, cfg), build_options(in, cfg), level);
  json r = header("kuranishi", cfg);
  r["map"] = map;
  r["group"] = group;
  r["base"] = to_json(m);
  r["normal_form"] = nf_summary(k.nf);
  r["V_basis"] = to_json(k.V_basis);
  r["F_basis"] = to_json(k.F_basis);
  r["V_radius"] = k.V_radius;
  r["chart_points"] = static_cast<long>(k.chart_points.size());
  r["s_at_zero"] = k.s_at_zero;
  r["s_equivariance_defect"] = k.s_equivariance_defect;
  r["coim_defect"] = k.coim_defect;
  r["s_defect"] = k.s_defect;
  r["virtual_dim"] = k.virtual_dim;
  return {{"kuranishi.json", io::dump(r)}};
}

Vec system_point(const json& in, const symred::LinearSymplecticSystem& sys, Rng& rng) {
  if (!in.contains("point")) return rng.normal_vec(sys.dim);
  Vec x = io::vec_from_json(in.at("point"), "point");
  require_dim(x.size(), sys.dim, "point");
  return x;
}

Outputs cmd_momentum(const json& in, const RunConfig& cfg) {
  const auto sys = symred::builtin_system(get<std::string>(in, "system", "oscillator"));
  sys.validate();
  const int n = get(in, "samples", 16);
  if (n < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  Rng rng(cfg.seed);
  json r = header("momentum", cfg), pts = json::array();
  r["system"] = sys.name;
  r["dim"] = sys.dim;
  r["algebra_dim"] = sys.k();
  double rel = 0, eq = 0;
  for (int i = 0; i < n; ++i) {
    const Vec x = (i == 0 && in.contains("point")) ? system_point(in, sys, rng) : rng.normal_vec(sys.dim);
    const auto J = symred::momentum(sys, x);
    const double d = symred::momentum_relation_check(sys, x, rng.normal_mat(sys.dim, 3));
    const double e = symred::momentum_equivariance_defect(sys, x);
    rel = std::max(rel, d);
    eq = std::max(eq, e);
    pts.push_back({{"x", to_json(x)}, {"J", to_json(J.components)}, {"relation_defect", d},
                   {"equivariance_defect", e}});
  }
  r["points"] = pts;
  r["max_relation_defect"] = rel;
  r["max_equivariance_defect"] = eq;
  return {{"momentum.json", io::dump(r)}};
}

Outputs cmd_mgs(const json& in, const RunConfig& cfg) {
  const auto sys = symred::builtin_system(get<std::string>(in, "system", "su2_c2"));
  sys.validate();
  Rng rng(cfg.seed);
  const Vec m = system_point(in, sys, rng);
  const auto wa = symred::witt_artin(sys, m);
  const auto mg = symred::mgs_at(sys, m);
  const auto bc = symred::bifurcation_check(sys, m);
  json r = header("mgs", cfg);
  r["system"] = sys.name;
  r["point"] = to_json(m);
  r["witt_artin"] = {{"dim_q", wa.dim_q},     {"dim_g_mu", wa.dim_g_mu},
                     {"dim_E", wa.dim_E},     {"dim_F", wa.dim_F},
                     {"spans", wa.spans},     {"E_symplectic", wa.E_symplectic},
                     {"stabilizer_dim", wa.stabilizer_dim}, {"parity_even", wa.parity_even}};
  json forms = json::array();
  for (const auto& q : mg.forms) forms.push_back(to_json(q));
  double scal = 0;
  for (int i = 0; i < 16 && mg.E.cols() > 0; ++i)
    scal = std::max(scal, mg.scaling_defect(rng.uniform(-3, 3), rng.normal_vec(mg.E.cols())));
  r["mgs"] = {{"dim_E", mg.E.cols()}, {"stabilizer_dim", mg.stabilizer.cols()}, {"forms", forms},
              {"invariance_defect", mg.invariance_defect}, {"scaling_defect", scal}};
  r["bifurcation"] = {{"angle_ker", bc.angle_ker}, {"angle_im", bc.angle_im},
                      {"angle_isotropic", bc.angle_isotropic}, {"holds", bc.holds(1e-9)}};
  return {{"mgs.json", io::dump(r)}};
}

Outputs cmd_strata(const json& in, const RunConfig& cfg) {
  const auto sys = symred::builtin_system(get<std::string>(in, "system", "oscillator"));
  sys.validate();
  const int n = get(in, "samples", 64);
  if (n < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  const auto recs = symred::reduce_zero_level(sys, n, cfg.seed);
  json r = header("strata", cfg), arr = json::array();
  r["system"] = sys.name;
  for (const auto& s : recs)
    arr.push_back({{"stabilizer_dim", s.label.stabilizer_dim},
                   {"finite_order", s.label.finite_order},
                   {"samples", static_cast<long>(s.sample_points.size())},
                   {"fixed_subspace", to_json(s.fixed_subspace_basis)},
                   {"reduced_form", to_json(s.reduced_form)},
                   {"reduced_invertible", s.reduced_invertible}});
  r["strata"] = arr;
  return {{"strata.json", io::dump(r)}};
}

Outputs cmd_oscillator(const json& in, const RunConfig& cfg) {
  using namespace cotred;
  Vec s0v = in.contains("state") ? io::vec_from_json(in.at("state"), "state") : Vec(Eigen::Vector4d(1, 0, 0.5, 0));
  require_dim(s0v.size(), 4, "state");
  const OscState s0 = OscState::from(Eigen::Vector4d(s0v));
  const double t_end = get(in, "t_end", 20.0), dt = get(in, "dt", 1e-3);
  const int every = get(in, "sample_every", 100);
  const double t0 = get(in, "t0", 0.3), H0 = get(in, "H0", 1.0);
  const int nfront = get(in, "frontier_samples", 8);
  if (!(t_end > 0)) throw Error(ErrorCode::InvalidInput, "t_end must be positive");
  if (!(H0 > 0)) throw Error(ErrorCode::InvalidInput, "H0 must be positive");

  const auto tr = oscillator_rk4(s0, t_end, dt, every);
  const double J0 = angular_momentum(s0);
  std::ostringstream csv;
  csv << "t,q1,q2,p1,p2,J,H,seam,E_plus,E_minus\n";
  double drift = 0, cone = 0;
  std::map<std::string, long> counts;
  std::vector<std::pair<double, double>> orbit;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const OscState& s = tr.states[i];
    const ConePoint c = K_map(s);
    const double J = angular_momentum(s);
    drift = std::max(drift, std::abs(J - J0));
    cone = std::max(cone, std::abs(c.cone_defect() + J * J));
    std::string seam = "OFF_LEVEL";
    if (std::abs(J) < kSeamTol) seam = to_string(seam_classify(s));
    ++counts[seam];
    orbit.push_back({c.e_plus, c.e_minus});
    csv << io::num(tr.times[i]) << ',' << io::num(s.q1) << ',' << io::num(s.q2) << ',' << io::num(s.p1)
        << ',' << io::num(s.p2) << ',' << io::num(J) << ',' << io::num(c.h) << ',' << seam << ','
        << io::num(c.e_plus) << ',' << io::num(c.e_minus) << '\n';
  }

  // I∘t* against the cone flow across blow-up times.
  const TstarValue v0 = tstar_flow(H0, t0, 0.0);
  const ConePoint c0 = I_map(v0.q_bar, v0.p_bar);
  double agree = 0;
  json blow = json::array();
  for (double tc : blowup_times(t0, 0.0, t_end)) {
    blow.push_back(tc);
    for (double t : {tc - 1e-4, tc + 1e-4}) {
      const TstarValue v = tstar_flow(H0, t0, t);
      if (v.blowup) continue;
      agree = std::max(agree, (I_map(v.q_bar, v.p_bar).vec() - cone_flow(c0, t).vec()).norm());
    }
  }

  const auto fr = seam_frontier_check(nfront, cfg.seed);
  json seqs = json::array();
  for (const auto& s : fr.sequences)
    seqs.push_back({{"name", s.name}, {"upper", to_string(s.upper)}, {"lower", to_string(s.lower)},
                    {"labels_ok", s.labels_ok}, {"converges", s.converges},
                    {"final_distance", s.final_distance}});
  json realized = json::array();
  for (const auto& [u, l] : fr.realized)
    realized.push_back({{"upper", to_string(u)}, {"lower", to_string(l)}});

  json r = header("oscillator", cfg);
  r["initial_state"] = to_json(Vec(s0.vec()));
  r["integrator"] = {{"method", tr.method}, {"dt", dt}, {"t_end", t_end}, {"sample_every", every}};
  r["noether_drift"] = drift;
  r["cone_identity_defect"] = cone;
  r["seam_counts"] = counts;
  r["tstar"] = {{"H0", H0}, {"t0", t0}, {"blowup_times", blow}, {"cone_flow_agreement", agree}};
  r["frontier"] = {{"sequences", seqs}, {"realized", realized}, {"matches_expected", fr.matches_expected}};

  double emax = 1e-12;
  for (const auto& [a, b] : orbit) emax = std::max({emax, std::abs(a), std::abs(b)});
  emax *= 1.15;
  svg::Canvas c(480, 480, -emax, emax, -emax, emax);
  std::vector<std::pair<double, double>> tline;
  for (int i = 0; i <= 360; ++i) {
    const double s = 2 * pi * i / 360;
    tline.push_back({H0 * -std::cos(2 * s), H0 * -std::sin(2 * s)});
  }
  c.polyline({{-emax, 0}, {emax, 0}}, "#bbbbbb");
  c.polyline({{0, -emax}, {0, emax}}, "#bbbbbb");
  c.polyline(orbit, "#1f77b4", 2);
  if (H0 <= emax) c.polyline(tline, "#d62728", 1);
  c.circle(0, 0, 4, "black");
  c.text(-0.95 * emax, 0.9 * emax, "cone {J = 0} seen from above: (E+, E-)");
  c.text(0.05 * emax, -0.08 * emax, "PP vertex");
  return {{"trajectory.csv", csv.str()}, {"cone.svg", c.str()}, {"seams.json", io::dump(r)}};
}

gaugealg::EWPoint ew_point(const json& in) {
  gaugealg::EWPoint p;
  p.g = get(in, "g", p.g);
  p.gp = get(in, "gp", p.gp);
  p.lambda = get(in, "lambda", p.lambda);
  p.v = get(in, "v", p.v);
  p.ell = get(in, "ell", p.ell);
  if (in.contains("point")) {
    const json& q = in.at("point");
    for (auto it = q.begin(); it != q.end(); ++it) {
      const std::string& k = it.key();
      if (k == "Z") p.Z = it->get<double>();
      else if (k == "A_gamma") p.A_gamma = it->get<double>();
      else if (k == "D_Z") p.D_Z = it->get<double>();
      else if (k == "D_gamma") p.D_gamma = it->get<double>();
      else if (k == "eta") p.eta = it->get<double>();
      else if (k == "dAgamma") p.dAgamma = it->get<double>();
      else if (k == "dZ") p.dZ = it->get<double>();
      else if (k == "deta") p.deta = it->get<double>();
      else if (k == "W_plus") p.W_plus = io::cplx_from_json(*it, "W_plus");
      else if (k == "W_minus") p.W_minus = io::cplx_from_json(*it, "W_minus");
      else if (k == "D_plus") p.D_plus = io::cplx_from_json(*it, "D_plus");
      else if (k == "D_minus") p.D_minus = io::cplx_from_json(*it, "D_minus");
      else if (k == "Pi1") p.Pi1 = io::cplx_from_json(*it, "Pi1");
      else if (k == "Pi2") p.Pi2 = io::cplx_from_json(*it, "Pi2");
      else throw Error(ErrorCode::InvalidInput, "unknown electroweak field '" + k + "'");
    }
  }
  p.validate();
  return p;
}

gaugealg::EWPoint random_stratum(const gaugealg::EWPoint& base, Rng& rng) {
  gaugealg::EWPoint p = base;
  p.Z = rng.normal();
  p.A_gamma = rng.normal();
  p.D_Z = rng.normal();
  p.D_gamma = rng.normal();
  p.eta = rng.uniform(0.1, 2.0);
  p.Pi2 = {rng.normal(), rng.normal()};
  p.dAgamma = rng.normal();
  p.dZ = rng.normal();
  p.deta = rng.normal();
  return p;
}

Outputs cmd_ew(const json& in, const RunConfig& cfg) {
  using namespace gaugealg;
  const EWPoint base = ew_point(in);
  const int n = get(in, "samples", 1000);
  if (n < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  Rng rng(cfg.seed);
  double dens = 0, round = 0, gauss = 0, mass = 0;
  bool collapsed = true;
  for (int i = 0; i < n; ++i) {
    const EWPoint p = random_stratum(base, rng);
    dens = std::max(dens, singular_hamiltonian_identity(p).max_defect);
    const auto g = gauss_singular_reduction(p);
    collapsed = collapsed && g.collapsed;
    gauss = std::max({gauss, g.ab_defect, g.c_defect, g.d_defect});
    const auto m = masses(p);
    mass = std::max(mass, std::abs(m.mZ_sq - m.mZ_sq_fd));
    EWPoint w = base;
    w.W1 = rng.normal();
    w.W2 = rng.normal();
    w.W3 = rng.normal();
    w.B = rng.normal();
    const EWPoint back = ew_basis_change(ew_basis_change(w, Direction::Forward), Direction::Inverse);
    round = std::max({round, std::abs(back.W1 - w.W1), std::abs(back.W2 - w.W2), std::abs(back.W3 - w.W3),
                      std::abs(back.B - w.B)});
  }
  json r = header("ew", cfg);
  r["couplings"] = {{"g", base.g}, {"gp", base.gp}, {"e", base.e()}, {"sin_w", base.sin_w()},
                    {"lambda", base.lambda}, {"v", base.v}, {"ell", base.ell}};
  r["commutator_defect"] = ew_commutators_check();
  r["basis_roundtrip_defect"] = round;
  r["samples"] = n;
  r["density_max_defect"] = dens;
  r["gauss_max_defect"] = gauss;
  r["gauss_collapsed"] = collapsed;
  r["mass_fd_max_defect"] = mass;
  const EWPoint p = in.contains("point") ? base : random_stratum(base, rng);
  const auto d = singular_hamiltonian_identity(p);
  const auto m = masses(p);
  r["point"] = {{"general_density", d.general}, {"reduced_density", d.reduced},
                {"potential", d.potential}, {"printed_potential_term", d.printed_potential_term},
                {"mZ_sq", m.mZ_sq}, {"mZ_sq_fd", m.mZ_sq_fd}, {"eta_coefficient", m.eta_coefficient},
                {"eta_printed", m.eta_printed},
                {"gauss_c_source", gauss_singular_reduction(p).parts.c_source}};
  r["asd_virtual_dim"] = {{"p1", 4}, {"chi_minus_sigma", 2}, {"dimG", 3}, {"value", asd_virtual_dim(4, 2, 3)}};
  return {{"ew.json", io::dump(r)}};
}

Outputs cmd_howe(const json& in, const RunConfig& cfg) {
  using namespace gaugealg;
  const int bound = get(in, "param_bound", 3);
  const int samples = get(in, "samples", 200);
  if (samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  const auto tuples = goursat_enumerate(bound);
  json r = header("howe", cfg), recs = json::array(), gs = json::array();
  for (const auto& c : verify_centralizer_table(cfg.seed, samples)) {
    auto cj = [](const CentralizerCheck& k) {
      return json{{"commute_defect", k.commute_defect}, {"membership_defect", k.membership_defect},
                  {"commutant_dim", k.commutant_dim}, {"expected_dim", k.expected_dim},
                  {"outside_min_defect", std::isinf(k.outside_min_defect) ? json(nullptr) : json(k.outside_min_defect)},
                  {"ok", k.ok}};
    };
    recs.push_back({{"holonomy", to_string(c.record.holonomy)}, {"stabilizer", to_string(c.record.stabilizer)},
                    {"howe", to_string(c.record.howe)}, {"stabilizer_check", cj(c.stabilizer)},
                    {"howe_check", cj(c.howe)}});
  }
  bool all_ok = true;
  Rng rng(cfg.seed);
  for (const auto& t : tuples) {
    json row = {{"howe", t.howe_label()}, {"G1", t.G1.label()}, {"G2", t.G2.label()}, {"L1", t.L1.label()},
                {"L2", t.L2.label()}, {"theta", t.theta_label()}};
    if (t.unenumerated) {
      row = {{"howe", t.howe_label()}, {"status", "UNENUMERATED"}};
    } else {
      const auto c = verify_goursat(t, rng.bits(), samples);
      all_ok = all_ok && c.ok;
      row["commute_defect"] = c.centralizer.commute_defect;
      row["membership_defect"] = c.centralizer.membership_defect;
      row["relation_defect"] = c.relation_defect;
      row["ok"] = c.ok;
    }
    gs.push_back(row);
  }
  r["centralizer_table"] = recs;
  r["howe_products"] = howe_product_enumerate();
  r["goursat"] = {{"param_bound", bound}, {"tuples", gs}, {"all_ok", all_ok}};
  return {{"holonomy_centralizers.txt", format_holonomy_table(su2_centralizer_table())},
          {"howe_subgroups.txt", format_howe_table(goursat_families())},
          {"howe.json", io::dump(r)}};
}

gaugealg::SU2Elem random_su2(Rng& rng) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q(i) = rng.normal();
  q.normalize();
  return {cplx(q(0), q(1)), cplx(q(2), q(3))};
}

Outputs cmd_repvar(const json& in, const RunConfig& cfg) {
  using namespace gaugealg;
  const std::string group = get<std::string>(in, "group", "SU2");
  const int genus = get(in, "genus", 1);
  const int pairs = get(in, "pairs", 500);
  const double tol = cfg.tol.value_or(1e-9);
  if (group != "SU2" && group != "U1") throw Error(ErrorCode::InvalidInput, "group must be SU2 or U1");
  if (genus < 1) throw Error(ErrorCode::InvalidInput, "genus must be at least 1");
  Rng rng(cfg.seed);
  json r = header("repvar", cfg);
  r["group"] = group;
  r["genus"] = genus;

  RepVarPoint pt;
  pt.genus = genus;
  pt.abelian = group == "U1";
  if (in.contains("entries")) {
    const json& e = in.at("entries");
    if (!e.is_array()) throw Error(ErrorCode::InvalidInput, "entries must be an array");
    for (const auto& x : e) {
      if (pt.abelian) {
        pt.u1.push_back(io::cplx_from_json(x, "entry"));
      } else {
        const Vec q = io::vec_from_json(x, "entry");
        require_dim(q.size(), 4, "SU(2) entry [re a, im a, re b, im b]");
        pt.su2.push_back({cplx(q(0), q(1)), cplx(q(2), q(3))});
      }
    }
    pt.validate();
    const CMat rel = relation_map(pt);
    r["relation_defect"] = (rel - CMat::Identity(rel.rows(), rel.cols())).cwiseAbs().maxCoeff();
    r["orbit_type"] = to_string(repvar_orbit_type(pt));
    try {
      const auto tr = repvar_tangent_rank(pt, tol);
      r["jacobian_rank"] = tr.jacobian_rank;
      r["local_dim"] = tr.local_dim;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::OffVariety) throw;
      r["on_variety"] = false;
    }
    return {{"repvar.json", io::dump(r)}};
  }

  if (pt.abelian) {
    // Every tuple lies on the level set; σ is the volume form of each torus factor.
    long min_dim = 1L << 30, max_dim = 0;
    for (int i = 0; i < pairs; ++i) {
      pt.u1.clear();
      for (int j = 0; j < 2 * genus; ++j) pt.u1.push_back(std::polar(1.0, rng.uniform(0, 2 * pi)));
      const auto tr = repvar_tangent_rank(pt, tol);
      min_dim = std::min(min_dim, tr.local_dim);
      max_dim = std::max(max_dim, tr.local_dim);
    }
    const cplx a = pt.u1[0], b = pt.u1[1];
    const double e[2][2] = {{1, 0}, {0, 1}};
    Eigen::Matrix2d G;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) G(i, j) = sigma_form_u1(a, b, e[i][0], e[i][1], e[j][0], e[j][1]);
    const double gram = G.determinant();
    r["local_dim"] = {{"min", min_dim}, {"max", max_dim}};
    r["sigma_gram_det"] = gram;
    return {{"repvar.json", io::dump(r)}};
  }

  std::map<std::string, long> hist;
  for (int i = 0; i < pairs; ++i) {
    pt.su2.clear();
    const int kind = i % 3;
    for (int j = 0; j < 2 * genus; ++j) {
      if (kind == 0) pt.su2.push_back(random_su2(rng));
      else if (kind == 1) pt.su2.push_back({std::polar(1.0, rng.uniform(0, 2 * pi)), 0.0});
      else pt.su2.push_back(rng.integer(0, 1) ? SU2Elem{} : SU2Elem{-1.0, 0.0});
    }
    ++hist[to_string(repvar_orbit_type(pt))];
  }
  r["orbit_types"] = hist;
  pt.su2.clear();
  for (int j = 0; j < 2 * genus; ++j) pt.su2.push_back({std::polar(1.0, rng.uniform(0.5, 2.5)), 0.0});
  const auto tr = repvar_tangent_rank(pt, tol);
  r["torus_tuple"] = {{"jacobian_rank", tr.jacobian_rank}, {"local_dim", tr.local_dim}};
  return {{"repvar.json", io::dump(r)}};
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> c = {
      {"ginv", "rank factorization, generalized inverse and bordered extension",
       {{"matrix", "matrix", "random 6x4 of rank 3", "{rows, cols, data} or nested rows"},
        {"rank_tol", "number", "1e-10", "relative singular value cutoff"},
        {"T_pm", "matrix", "zero", "lower-right block of the bordered operator"}},
       cmd_ginv},
      {"bvp", "discrete Green operator of the Neumann problem u'' = f",
       {{"n", "array", "[64, 128, 256]", "grid sizes (at least 8)"}},
       cmd_bvp},
      {"family", "uniform regularity and index stability of an operator family",
       {{"kind", "string", "dilation", "dilation (g - r x g' on monomials) or linear (F0 + p F1)"},
        {"degree", "integer", "10", "monomial degree for dilation"},
        {"grid", "array", "1/n for n <= degree", "parameter values"},
        {"F0", "matrix", "none", "base operator for linear"},
        {"F1", "matrix", "none", "direction for linear"},
        {"rank_tol", "number", "1e-10", "relative singular value cutoff"}},
       cmd_family},
      {"nf", "normal form charts of a builtin smooth map",
       {{"map", "string", "circle", "circle, angular_momentum, odd_cubic, radial, projection, square"},
        {"base", "array", "origin", "base point"},
        {"samples", "integer", "128", "validation samples"},
        {"grid", "integer", "0", "if positive, solve the reduced equation on this grid"},
        {"rank_tol", "number", "1e-10", "relative singular value cutoff"}},
       cmd_nf},
      {"kuranishi", "equivariant normal form and Kuranishi chart",
       {{"map", "string", "odd_cubic", "builtin map name"},
        {"group", "string", "z2_antipodal", "trivial, z2_antipodal or rotation"},
        {"base", "array", "origin", "fixed base point"},
        {"samples", "integer", "128", "validation samples"},
        {"level_samples", "integer", "64", "level-set samples"},
        {"rank_tol", "number", "1e-10", "relative singular value cutoff"}},
       cmd_kuranishi},
      {"momentum", "momentum map values and identities for a linear symplectic system",
       {{"system", "string", "oscillator", "oscillator, su2_c2, torus2, z2_reflection, trivial"},
        {"samples", "integer", "16", "random points"},
        {"point", "array", "random", "first evaluation point"}},
       cmd_momentum},
      {"mgs", "Witt-Artin decomposition, MGS normal form and bifurcation identities",
       {{"system", "string", "su2_c2", "builtin system"},
        {"point", "array", "random", "point m"}},
       cmd_mgs},
      {"strata", "orbit-type strata of the zero momentum level",
       {{"system", "string", "oscillator", "builtin system"},
        {"samples", "integer", "64", "zero-level samples"}},
       cmd_strata},
      {"oscillator", "2D harmonic oscillator at zero angular momentum: flow, cone and seams",
       {{"state", "array", "[1, 0, 0.5, 0]", "initial (q1, q2, p1, p2)"},
        {"t_end", "number", "20", "integration time"},
        {"dt", "number", "0.001", "RK4 step"},
        {"sample_every", "integer", "100", "steps between CSV rows"},
        {"t0", "number", "0.3", "phase of the reduced T*R+ curve"},
        {"H0", "number", "1", "energy of the reduced curve"},
        {"frontier_samples", "integer", "8", "random directions for seam sequences"}},
       cmd_oscillator},
      {"ew", "electroweak basis change and singular-stratum identities",
       {{"g", "number", "0.65", "SU(2) coupling"},
        {"gp", "number", "0.35", "U(1) coupling"},
        {"lambda", "number", "0.13", "Higgs self-coupling"},
        {"v", "number", "1", "vacuum scale"},
        {"ell", "number", "1", "overall density factor"},
        {"samples", "integer", "1000", "random stratum points"},
        {"point", "object", "random", "stratum fields Z, A_gamma, D_Z, D_gamma, eta, Pi2, dAgamma, dZ, deta, ..."}},
       cmd_ew},
      {"howe", "centralizer and Howe subgroup tables for SU(2) x U(1)",
       {{"param_bound", "integer", "3", "largest p, q, k instantiated"},
        {"samples", "integer", "200", "samples per centralizer direction"}},
       cmd_howe},
      {"repvar", "surface-group representation variety: relation, tangent rank, orbit type",
       {{"group", "string", "SU2", "SU2 or U1"},
        {"genus", "integer", "1", "surface genus"},
        {"pairs", "integer", "500", "random tuples"},
        {"entries", "array", "random", "explicit tuple: [re a, im a, re b, im b] per SU(2) entry, [re, im] per U(1) entry"}},
       cmd_repvar},
  };
  return c;
}

}  // namespace geomred::cli
