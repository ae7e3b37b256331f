#include "geomred/gaugealg.hpp"

#include "geomred/sampling.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace geomred::gaugealg {

using std::numbers::pi;
constexpr cplx I1{0.0, 1.0};

CMat SU2Elem::matrix() const {
  CMat M(2, 2);
  M << alpha, -std::conj(beta), beta, std::conj(alpha);
  return M;
}

SU2Elem SU2Elem::operator*(const SU2Elem& o) const {
  // first column of [[α, −β̄],[β, ᾱ]]·[[α′, −β̄′],[β′, ᾱ′]]
  return {alpha * o.alpha - std::conj(beta) * o.beta, beta * o.alpha + std::conj(alpha) * o.beta};
}

SU2Elem SU2Elem::from_matrix(const CMat& M) {
  require_dim(M.rows(), 2, "SU(2) matrix rows");
  require_dim(M.cols(), 2, "SU(2) matrix cols");
  return {M(0, 0), M(1, 0)};
}

const std::array<CMat, 3>& pauli() {
  static const std::array<CMat, 3> s = [] {
    std::array<CMat, 3> r;
    for (auto& m : r) m = CMat::Zero(2, 2);
    r[0] << 0, 1, 1, 0;
    r[1] << 0, -I1, I1, 0;
    r[2] << 1, 0, 0, -1;
    return r;
  }();
  return s;
}

CMat su2_generator(int a) { return 0.5 * I1 * pauli().at(a); }

SU2Elem su2_exp(const Eigen::Vector3d& theta) {
  const double n = theta.norm();
  if (n == 0) return {};
  const double c = std::cos(n / 2), s = std::sin(n / 2) / n;
  // cos(|θ|/2) + i sin(|θ|/2) θ̂·σ
  return {cplx(c, s * theta(2)), cplx(-s * theta(1), s * theta(0))};
}

namespace {

SU2Elem random_su2(Rng& rng) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q(i) = rng.normal();
  q.normalize();
  return {cplx(q(0), q(1)), cplx(q(2), q(3))};
}

SU2Elem torus(double phi) { return {std::polar(1.0, phi), 0.0}; }

double diff(const SU2Elem& a, const SU2Elem& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

double commutator_defect(const SU2Elem& a, const SU2Elem& b) { return diff(a * b, b * a); }

SU2Elem sample_class(SU2Class c, Rng& rng) {
  switch (c) {
    case SU2Class::SU2: return random_su2(rng);
    case SU2Class::U1: return torus(rng.uniform(0, 2 * pi));
    case SU2Class::Z2:
    case SU2Class::TRIVIAL_OR_Z2: return rng.integer(0, 1) ? SU2Elem{} : SU2Elem{-1.0, 0.0};
  }
  return {};
}

double distance_to_class(const SU2Elem& x, SU2Class c) {
  switch (c) {
    case SU2Class::SU2: return 0;
    case SU2Class::U1: return std::abs(x.beta);
    case SU2Class::Z2:
    case SU2Class::TRIVIAL_OR_Z2: return std::min(diff(x, SU2Elem{}), diff(x, SU2Elem{-1.0, 0.0}));
  }
  return 0;
}

long class_dim(SU2Class c) {
  switch (c) {
    case SU2Class::SU2: return 3;
    case SU2Class::U1: return 1;
    default: return 0;
  }
}

// Columns: Lie algebra coefficients of a basis of {X ∈ su(2) : [X, g] = 0 ∀g}.
Mat su2_commutant_basis(const std::vector<SU2Elem>& elems, double tol) {
  Mat M(8 * std::max<std::size_t>(elems.size(), 1), 3);
  M.setZero();
  for (std::size_t k = 0; k < elems.size(); ++k) {
    const CMat g = elems[k].matrix();
    for (int a = 0; a < 3; ++a) {
      const CMat C = su2_generator(a) * g - g * su2_generator(a);
      for (int i = 0; i < 4; ++i) {
        M(8 * k + i, a) = C(i % 2, i / 2).real();
        M(8 * k + 4 + i, a) = C(i % 2, i / 2).imag();
      }
    }
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(3 - rank);
}

}  // namespace

std::string Subgroup::label() const {
  switch (sym) {
    case Sym::E: return "{e}";
    case Sym::Z2: return "Z2";
    case Sym::Zn: return n == 0 ? std::string("Z") + letter : "Z" + std::to_string(n);
    case Sym::Z2n: return n == 0 ? std::string("Z2") + letter : "Z" + std::to_string(2 * n);
    case Sym::U1: return "U(1)";
    case Sym::SU2: return "SU(2)";
  }
  return "?";
}

namespace {

bool is_symbolic(const Subgroup& s) { return (s.sym == Sym::Zn || s.sym == Sym::Z2n) && s.n == 0; }
bool is_finite(const Subgroup& s) { return s.sym != Sym::U1 && s.sym != Sym::SU2; }

long order(const Subgroup& s) {
  switch (s.sym) {
    case Sym::E: return 1;
    case Sym::Z2: return 2;
    case Sym::Zn: return s.n;
    case Sym::Z2n: return 2L * s.n;
    default: return 0;
  }
}

bool same(const Subgroup& a, const Subgroup& b) {
  if (is_symbolic(a) || is_symbolic(b))
    return a.sym == b.sym && a.n == b.n && a.letter == b.letter;
  if (is_finite(a) && is_finite(b)) return order(a) == order(b);
  return a.sym == b.sym;
}

enum class Quotient { Trivial, Z2, U1, Other, Invalid };

Quotient quotient(const Subgroup& big, const Subgroup& small) {
  if (!big.contains(small)) return Quotient::Invalid;
  if (same(big, small)) return Quotient::Trivial;
  if (big.sym == Sym::U1) return is_finite(small) ? Quotient::U1 : Quotient::Other;
  if (big.sym == Sym::SU2) return Quotient::Other;
  if (is_symbolic(big) || is_symbolic(small)) {
    // ℤ_{2p}/ℤ_p ≅ ℤ₂
    if (big.sym == Sym::Z2n && small.sym == Sym::Zn && big.letter == small.letter) return Quotient::Z2;
    return Quotient::Other;
  }
  const long r = order(big) / order(small);
  return r == 1 ? Quotient::Trivial : r == 2 ? Quotient::Z2 : Quotient::Other;
}

}  // namespace

bool Subgroup::contains(const Subgroup& o) const {
  if (sym == Sym::SU2 || o.sym == Sym::E) return true;
  if (sym == Sym::U1) return o.sym != Sym::SU2;
  if (!is_finite(o)) return false;
  if (is_symbolic(*this) || is_symbolic(o)) {
    if (same(*this, o)) return true;
    if (sym == Sym::Z2n && is_symbolic(*this))
      return o.sym == Sym::Z2 || (o.sym == Sym::Zn && o.letter == letter && o.n == 0);
    return false;
  }
  return order(*this) % order(o) == 0;
}

const char* to_string(SU2Class c) {
  switch (c) {
    case SU2Class::TRIVIAL_OR_Z2: return "TRIVIAL_OR_Z2";
    case SU2Class::Z2: return "Z2";
    case SU2Class::U1: return "U1";
    case SU2Class::SU2: return "SU2";
  }
  return "?";
}

std::string display(SU2Class c) {
  switch (c) {
    case SU2Class::TRIVIAL_OR_Z2: return "{e}, Z2";
    case SU2Class::Z2: return "Z2";
    case SU2Class::U1: return "U(1)";
    case SU2Class::SU2: return "SU(2)";
  }
  return "?";
}

std::vector<HoweRecord> su2_centralizer_table() {
  return {{SU2Class::TRIVIAL_OR_Z2, SU2Class::SU2, SU2Class::Z2},
          {SU2Class::U1, SU2Class::U1, SU2Class::U1},
          {SU2Class::SU2, SU2Class::Z2, SU2Class::SU2}};
}

long su2_commutant_dim(const std::vector<SU2Elem>& elems, double tol) {
  return su2_commutant_basis(elems, tol).cols();
}

CentralizerCheck check_centralizer(const std::vector<SU2Elem>& generators, SU2Class claimed,
                                   std::uint64_t seed, int samples, double tol) {
  CentralizerCheck r;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const SU2Elem h = sample_class(claimed, rng);
    for (const auto& g : generators) r.commute_defect = std::max(r.commute_defect, commutator_defect(h, g));
  }

  const Mat N = su2_commutant_basis(generators, 1e-9);
  r.commutant_dim = N.cols();
  r.expected_dim = class_dim(claimed);
  for (int i = 0; i < samples; ++i) {
    Eigen::Vector3d theta = Eigen::Vector3d::Zero();
    if (N.cols() > 0) theta = N * (2.0 * rng.normal_vec(N.cols()));
    SU2Elem c = su2_exp(theta);
    if (rng.integer(0, 1)) c = c * SU2Elem{-1.0, 0.0};
    r.membership_defect = std::max(r.membership_defect, distance_to_class(c, claimed));
  }

  r.outside_min_defect = std::numeric_limits<double>::infinity();
  if (claimed != SU2Class::SU2) {
    for (int i = 0; i < samples; ++i) {
      SU2Elem x = random_su2(rng);
      while (distance_to_class(x, claimed) < 0.1) x = random_su2(rng);
      double m = 0;
      for (const auto& g : generators) m = std::max(m, commutator_defect(x, g));
      r.outside_min_defect = std::min(r.outside_min_defect, m);
    }
  }
  r.ok = r.commute_defect < tol && r.membership_defect < tol &&
         r.commutant_dim == r.expected_dim && r.outside_min_defect > 1e-6;
  return r;
}

std::vector<HoweRecordCheck> verify_centralizer_table(std::uint64_t seed, int samples) {
  std::vector<HoweRecordCheck> out;
  Rng rng(seed);
  for (const auto& rec : su2_centralizer_table()) {
    std::vector<SU2Elem> hol, stab;
    for (int i = 0; i < samples; ++i) hol.push_back(sample_class(rec.holonomy, rng));
    for (int i = 0; i < samples; ++i) stab.push_back(sample_class(rec.stabilizer, rng));
    out.push_back({rec, check_centralizer(hol, rec.stabilizer, rng.bits(), samples),
                   check_centralizer(stab, rec.howe, rng.bits(), samples)});
  }
  return out;
}

std::vector<std::string> howe_product(const std::vector<SU2Class>& su2_howe) {
  if (su2_howe.empty()) throw Error(ErrorCode::InvalidInput, "empty list of Howe subgroups");
  std::vector<std::string> out;
  for (auto c : su2_howe) {
    const std::string s = display(c == SU2Class::TRIVIAL_OR_Z2 ? SU2Class::Z2 : c) + "xU(1)";
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::vector<std::string> howe_product_enumerate() {
  std::vector<SU2Class> h;
  const auto table = su2_centralizer_table();
  for (auto it = table.rbegin(); it != table.rend(); ++it) h.push_back(it->howe);
  return howe_product(h);
}

std::string GoursatTuple::howe_label() const {
  return display(howe == SU2Class::TRIVIAL_OR_Z2 ? SU2Class::Z2 : howe) + "xU(1)";
}

std::string GoursatTuple::theta_label() const {
  switch (theta) {
    case Theta::Trivial: return "trivial";
    case Theta::IdZ2: return "id_Z2";
    case Theta::Power:
      if (G2.sym == Sym::E) return k == 0 ? "z -> z^k, k in N" : "z -> z^" + std::to_string(k);
      if (k == 0) return "z -> z^(kq/p), k in N";
      return "z -> z^(" + std::to_string(k * G2.n) + "/" + std::to_string(L2.n) + ")";
  }
  return "?";
}

bool GoursatTuple::symbolic_valid() const {
  if (unenumerated) return false;
  const Quotient qg = quotient(G1, G2), ql = quotient(L1, L2);
  if (qg == Quotient::Invalid || ql == Quotient::Invalid) return false;
  // All G1 here are abelian, so normality reduces to containment.
  if (G1.sym == Sym::SU2) return false;
  switch (theta) {
    case Theta::Trivial: return qg == Quotient::Trivial && ql == Quotient::Trivial;
    case Theta::IdZ2: return qg == Quotient::Z2 && ql == Quotient::Z2;
    case Theta::Power: return qg == Quotient::U1 && ql == Quotient::U1 && k >= 0;
  }
  return false;
}

std::vector<GoursatTuple> goursat_families() {
  const Subgroup e{Sym::E}, z2{Sym::Z2}, u1{Sym::U1}, zp{Sym::Zn, 0, 'p'}, z2p{Sym::Z2n, 0, 'p'},
      zq{Sym::Zn, 0, 'q'};
  const auto S = SU2Class::SU2, U = SU2Class::U1;
  std::vector<GoursatTuple> f = {
      {S, e, e, u1, u1, Theta::Trivial},     {S, e, e, zp, zp, Theta::Trivial},
      {S, e, e, e, e, Theta::Trivial},       {S, z2, z2, u1, u1, Theta::Trivial},
      {S, z2, z2, zp, zp, Theta::Trivial},   {S, z2, z2, e, e, Theta::Trivial},
      {S, z2, e, z2p, zp, Theta::IdZ2},      {U, u1, u1, u1, u1, Theta::Trivial},
      {U, u1, u1, zp, zp, Theta::Trivial},   {U, u1, u1, e, e, Theta::Trivial},
      {U, u1, zq, u1, zp, Theta::Power},     {U, u1, e, u1, e, Theta::Power},
  };
  GoursatTuple marker;
  marker.howe = SU2Class::Z2;
  marker.G1 = Subgroup{Sym::SU2};
  marker.unenumerated = true;
  f.push_back(marker);
  return f;
}

std::vector<GoursatTuple> goursat_enumerate(int param_bound) {
  if (param_bound < 1) throw Error(ErrorCode::InvalidInput, "param_bound must be at least 1");
  std::vector<GoursatTuple> out;
  for (const auto& fam : goursat_families()) {
    if (fam.unenumerated) {
      out.push_back(fam);
      continue;
    }
    auto uses = [&](char c) {
      for (const Subgroup* s : {&fam.G1, &fam.G2, &fam.L1, &fam.L2})
        if (is_symbolic(*s) && s->letter == c) return true;
      return false;
    };
    const int P = uses('p') ? param_bound : 1, Q = uses('q') ? param_bound : 1,
              K = fam.theta == Theta::Power ? param_bound : 1;
    for (int p = 1; p <= P; ++p)
      for (int q = 1; q <= Q; ++q)
        for (int k = 1; k <= K; ++k) {
          GoursatTuple t = fam;
          for (Subgroup* s : {&t.G1, &t.G2, &t.L1, &t.L2})
            if (is_symbolic(*s)) s->n = s->letter == 'q' ? q : p;
          if (t.theta == Theta::Power) t.k = k;
          out.push_back(t);
        }
  }
  return out;
}

GoursatCheck verify_goursat(const GoursatTuple& t, std::uint64_t seed, int samples) {
  if (t.unenumerated) throw Error(ErrorCode::InvalidInput, "tuple is not enumerated");
  for (const Subgroup* s : {&t.G1, &t.G2, &t.L1, &t.L2})
    if (is_symbolic(*s)) throw Error(ErrorCode::InvalidInput, "instantiate parameters first");
  if (t.theta == Theta::Power && t.k < 1) throw Error(ErrorCode::InvalidInput, "power map needs k >= 1");

  GoursatCheck r;
  r.tuple = t;
  r.symbolic_ok = t.symbolic_valid();
  Rng rng(seed);
  auto root_of_unity = [&](long n) { return std::polar(1.0, 2 * pi * rng.integer(0, n - 1) / n); };

  // (g, l) ∈ G1 × L1 with θ(gG₂) = lL₂
  std::vector<SU2Elem> gs;
  for (int i = 0; i < samples; ++i) {
    SU2Elem g;
    cplx l = 1.0;
    double rel = 0;
    switch (t.theta) {
      case Theta::Trivial: {
        if (t.G1.sym == Sym::Z2) g = sample_class(SU2Class::Z2, rng);
        if (t.G1.sym == Sym::U1) g = torus(rng.uniform(0, 2 * pi));
        if (t.L1.sym == Sym::U1) l = std::polar(1.0, rng.uniform(0, 2 * pi));
        else l = root_of_unity(order(t.L1));
        break;
      }
      case Theta::IdZ2: {
        const long n2 = order(t.L1), n = order(t.L2);
        const int j = rng.integer(0, static_cast<int>(n2) - 1);
        l = std::polar(1.0, 2 * pi * j / n2);
        g = (j % 2) ? SU2Elem{-1.0, 0.0} : SU2Elem{};
        // l^{|L2|} = ±1 tracks the class of g in ℤ₂
        rel = std::abs(std::pow(l, static_cast<double>(n)) - g.alpha);
        break;
      }
      case Theta::Power: {
        const double phi = rng.uniform(0, 2 * pi);
        g = torus(phi);
        const long q = order(t.G2), p = order(t.L2);
        const int j = rng.integer(0, static_cast<int>(p) - 1);
        l = std::polar(1.0, (static_cast<double>(q * t.k) * phi + 2 * pi * j) / p);
        rel = std::abs(std::pow(l, static_cast<double>(p)) -
                       std::polar(1.0, static_cast<double>(q * t.k) * phi));
        break;
      }
    }
    r.relation_defect = std::max(r.relation_defect, rel);
    gs.push_back(g);
  }
  // The U(1) factor is abelian, so the centralizer is C_SU(2)(H′_G) × U(1).
  r.centralizer = check_centralizer(gs, t.howe, rng.bits(), samples);
  r.ok = r.symbolic_ok && r.centralizer.ok && r.relation_defect < 1e-10;
  return r;
}

namespace {

std::string format_rows(const std::vector<std::vector<std::string>>& rows,
                        const std::vector<std::pair<std::size_t, std::string>>& trailers = {}) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (w.size() <= j) w.push_back(0);
      w[j] = std::max(w[j], r[j].size());
    }
  std::ostringstream os;
  auto pad = [&](const std::string& s, std::size_t j) { return s + std::string(w[j] + 2 - s.size(), ' '); };
  std::size_t ti = 0;
  for (std::size_t i = 0; i <= rows.size(); ++i) {
    while (ti < trailers.size() && trailers[ti].first == i) {
      os << trailers[ti].second << '\n';
      ++ti;
    }
    if (i == rows.size()) break;
    const auto& r = rows[i];
    for (std::size_t j = 0; j + 1 < r.size(); ++j) os << pad(r[j], j);
    os << r.back() << '\n';
  }
  return os.str();
}

}  // namespace

std::string format_holonomy_table(const std::vector<HoweRecord>& rows) {
  std::vector<std::vector<std::string>> t = {{"Hol_A", "Gau_A", "H"}};
  for (const auto& r : rows) t.push_back({display(r.holonomy), display(r.stabilizer), display(r.howe)});
  return format_rows(t);
}

std::string format_howe_table(const std::vector<GoursatTuple>& families) {
  std::vector<std::vector<std::string>> t = {{"H", "G1", "G2", "L1", "L2", "theta"}};
  std::vector<std::pair<std::size_t, std::string>> trailers;
  std::string last;
  std::size_t hw = 1;
  for (const auto& f : families) hw = std::max(hw, f.howe_label().size());
  for (const auto& f : families) {
    const std::string h = f.howe_label();
    const std::string shown = h == last ? "" : h;
    last = h;
    if (f.unenumerated) {
      trailers.push_back({t.size(), shown + std::string(hw + 2 - shown.size(), ' ') +
                                        "many choices (UNENUMERATED)"});
      continue;
    }
    t.push_back({shown, f.G1.label(), f.G2.label(), f.L1.label(), f.L2.label(), f.theta_label()});
  }
  return format_rows(t, trailers);
}

ConjugateK conjugate_K(const SU2Elem& a, double theta) {
  const cplx e = std::polar(1.0, theta / 2), eb = std::conj(e);
  const double aa = std::norm(a.alpha), bb = std::norm(a.beta);
  ConjugateK r;
  r.matrix = CMat(2, 2);
  r.matrix << aa * e + bb * eb, -a.alpha * std::conj(a.beta) * (eb - e),
      std::conj(a.alpha) * a.beta * (e - eb), aa * eb + bb * e;
  r.in_K = std::abs(a.beta) <= 1e-12 || std::abs(std::polar(1.0, theta) - 1.0) <= 1e-12;
  return r;
}

const char* to_string(PairStabilizer s) { return s == PairStabilizer::K ? "K" : "Z2"; }

PairStabilizer stabilizer_pair(const std::vector<cplx>& beta_samples, double tol) {
  for (const auto& b : beta_samples)
    if (std::abs(b) > tol) return PairStabilizer::Z2;
  return PairStabilizer::K;
}

void EWPoint::validate() const {
  if (!(g > 0) || !(gp > 0)) throw Error(ErrorCode::BadCouplings, "couplings g and g' must be positive");
  const double vals[] = {lambda, v, ell, W1, W2, W3, B, W_plus.real(), W_plus.imag(), W_minus.real(),
                         W_minus.imag(), Z, A_gamma, D_plus.real(), D_plus.imag(), D_minus.real(),
                         D_minus.imag(), D_Z, D_gamma, eta, Pi1.real(), Pi1.imag(), Pi2.real(),
                         Pi2.imag(), dAgamma, dZ, deta};
  for (double x : vals)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "electroweak point has non-finite fields");
  if (eta < 0) throw Error(ErrorCode::InvalidInput, "eta must be non-negative");
}

EWPoint ew_basis_change(const EWPoint& pt, Direction dir) {
  if (!(pt.g > 0) || !(pt.gp > 0)) throw Error(ErrorCode::BadCouplings, "couplings g and g' must be positive");
  EWPoint r = pt;
  const double s = pt.s(), r2 = std::sqrt(2.0);
  if (dir == Direction::Forward) {
    r.W_plus = cplx(pt.W1, -pt.W2) / r2;
    r.W_minus = cplx(pt.W1, pt.W2) / r2;
    r.Z = (pt.g * pt.W3 - pt.gp * pt.B) / s;
    r.A_gamma = (pt.gp * pt.W3 + pt.g * pt.B) / s;
  } else {
    r.W1 = ((pt.W_plus + pt.W_minus) / r2).real();
    r.W2 = (I1 * (pt.W_plus - pt.W_minus) / r2).real();
    r.W3 = (pt.g * pt.Z + pt.gp * pt.A_gamma) / s;
    r.B = (-pt.gp * pt.Z + pt.g * pt.A_gamma) / s;
  }
  return r;
}

double ew_commutators_check() {
  auto block = [](const CMat& su2, cplx u1) {
    CMat M = CMat::Zero(3, 3);
    M.topLeftCorner(2, 2) = su2;
    M(2, 2) = u1;
    return M;
  };
  auto br = [](const CMat& a, const CMat& b) -> CMat { return a * b - b * a; };
  const CMat Z2 = CMat::Zero(2, 2);
  const CMat T1 = block(su2_generator(0), 0), T2 = block(su2_generator(1), 0),
             T3 = block(su2_generator(2), 0), U = block(Z2, I1);
  const double r2 = std::sqrt(2.0);
  const CMat t = (T1 + I1 * T2) / r2, tb = (T1 - I1 * T2) / r2, tp = T3 + U, tm = T3 - U;
  double d = 0;
  auto acc = [&](const CMat& lhs, const CMat& rhs) { d = std::max(d, (lhs - rhs).cwiseAbs().maxCoeff()); };
  acc(br(t, tb), I1 * T3);
  acc(br(t, tp), -I1 * t);
  acc(br(t, tm), -I1 * t);
  acc(br(tp, tm), CMat::Zero(3, 3));
  acc(br(tb, tp), I1 * tb);
  acc(br(tb, tm), I1 * tb);
  const CMat T[3] = {T1, T2, T3};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CMat rhs = CMat::Zero(3, 3);
      for (int c = 0; c < 3; ++c) {
        const int eps = (a == b || b == c || a == c) ? 0 : (((b - a + 3) % 3 == 1) ? 1 : -1);
        rhs -= static_cast<double>(eps) * T[c];
      }
      acc(br(T[a], T[b]), rhs);
    }
  return d;
}

namespace {

struct DensityParts {
  double D = 0, F = 0, Pi = 0, higgs = 0, potential = 0;
  double total(double ell) const { return 0.5 * ell * (D + F + Pi + higgs + potential); }
};

// t₋ and t₊ coefficients of D restricted to the reduced bundle.
std::pair<double, double> d_coeffs(const EWPoint& p) {
  const double gg = p.g * p.gp;
  const double c_minus = p.e() / gg * p.D_Z - (p.g * p.cos_w() - p.gp * p.sin_w()) / (2 * gg) * p.D_gamma;
  const double c_plus = p.D_gamma / (2 * p.e());
  return {c_minus, c_plus};
}

DensityParts general_parts(const EWPoint& pt) {
  pt.validate();
  const EWPoint o = ew_basis_change(pt, Direction::Inverse);
  const double g = pt.g, gp = pt.gp, r2 = std::sqrt(2.0);
  DensityParts d;

  // D = (D₋/g) t + (D₊/g) t̄ + c₋ t₋ + c₊ t₊ in the basis {t_a, i}, measured with κ⁻¹.
  const cplx d1 = (pt.D_minus + pt.D_plus) / (g * r2), d2 = I1 * (pt.D_minus - pt.D_plus) / (g * r2);
  const auto [cm, cp] = d_coeffs(pt);
  const double d3 = cm + cp, di = cp - cm;
  d.D = g * g * (std::norm(d1) + std::norm(d2) + d3 * d3) + gp * gp * di * di;

  // F = g dW³ t₃ + g′ dB i, measured with κ.
  const double s = pt.s();
  const double dW3 = (g * pt.dZ + gp * pt.dAgamma) / s, dB = (-gp * pt.dZ + g * pt.dAgamma) / s;
  const double F3 = g * dW3, Fi = gp * dB;
  d.F = F3 * F3 / (g * g) + Fi * Fi / (gp * gp);

  d.Pi = std::norm(pt.Pi1) + std::norm(pt.Pi2);

  CVec phi(2), dphi(2);
  phi << 0, pt.eta * pt.v / r2;
  dphi << 0, pt.deta * pt.v / r2;
  const CMat A = g * (o.W1 * su2_generator(0) + o.W2 * su2_generator(1) + o.W3 * su2_generator(2)) +
                 0.5 * I1 * gp * o.B * CMat::Identity(2, 2);
  d.higgs = (dphi + A * phi).squaredNorm();

  const double m = phi.squaredNorm() - 0.5 * pt.v * pt.v;
  d.potential = 2 * pt.lambda * m * m;
  return d;
}

void require_stratum(const EWPoint& pt) {
  const double off = std::max({std::abs(pt.W_plus), std::abs(pt.W_minus), std::abs(pt.D_plus),
                               std::abs(pt.D_minus), std::abs(pt.Pi1)});
  if (!(off <= 1e-12)) throw Error(ErrorCode::OffStratum, "point is not on the singular stratum");
}

}  // namespace

double general_density(const EWPoint& pt) { return general_parts(pt).total(pt.ell); }

double reduced_density(const EWPoint& pt) {
  pt.validate();
  const double v2 = pt.v * pt.v, s2 = pt.g * pt.g + pt.gp * pt.gp, h = pt.eta * pt.eta - 1;
  return 0.5 * pt.ell *
         (pt.D_gamma * pt.D_gamma + pt.D_Z * pt.D_Z + pt.dAgamma * pt.dAgamma + pt.dZ * pt.dZ +
          std::norm(pt.Pi2) + 0.5 * v2 * pt.deta * pt.deta +
          pt.eta * pt.eta * v2 * s2 / 8 * pt.Z * pt.Z + 0.5 * pt.lambda * v2 * v2 * h * h);
}

DensityReport singular_hamiltonian_identity(const EWPoint& pt) {
  pt.validate();
  require_stratum(pt);
  const DensityParts p = general_parts(pt);
  DensityReport r;
  r.general = p.total(pt.ell);
  r.reduced = reduced_density(pt);
  r.D_general = p.D;
  r.D_reduced = pt.D_Z * pt.D_Z + pt.D_gamma * pt.D_gamma;
  r.F_general = p.F;
  r.F_reduced = pt.dAgamma * pt.dAgamma + pt.dZ * pt.dZ;
  r.higgs_general = p.higgs;
  const double v2 = pt.v * pt.v, s2 = pt.s() * pt.s();
  r.higgs_reduced = 0.5 * v2 * pt.deta * pt.deta + pt.eta * pt.eta * v2 * s2 / 8 * pt.Z * pt.Z;
  r.potential = p.potential;
  const double h = pt.eta * pt.eta - 1;
  r.printed_potential_term = pt.lambda * v2 * h * h;
  r.max_defect = std::max({std::abs(r.general - r.reduced), std::abs(r.D_general - r.D_reduced),
                           std::abs(r.F_general - r.F_reduced), std::abs(r.higgs_general - r.higgs_reduced)});
  return r;
}

GaussParts gauss_algebraic_parts(const EWPoint& pt) {
  pt.validate();
  const double g = pt.g, sw = pt.sin_w(), cw = pt.cos_w(), e = pt.e();
  const double X = sw * pt.D_gamma + cw * pt.D_Z, Y = sw * pt.A_gamma + cw * pt.Z;
  const double hv = pt.eta * pt.v * g / 4;
  GaussParts r;
  r.a_lhs = -I1 * g * Y * pt.D_plus;
  r.a_rhs = -I1 * g * pt.W_minus * X - I1 * hv * std::conj(pt.Pi1);
  r.b_lhs = I1 * g * Y * pt.D_minus;
  r.b_rhs = I1 * g * pt.W_plus * X + I1 * hv * pt.Pi1;
  const cplx flux = pt.W_minus * pt.D_minus - pt.W_plus * pt.D_plus;
  r.c_coupling = I1 * g * cw * flux;
  r.c_source = pt.eta * pt.v * g * pt.gp / (2 * std::sqrt(2.0) * e) * pt.Pi2.imag();
  r.d_rhs = I1 * e * flux;

  // Higgs current ⟨ξ, φ⋄Π⟩ = Re⟨ρ(ξ)φ, Π⟩ on t₃ and i; d_A D = −φ⋄Π.
  CVec phi(2), Pi(2);
  phi << 0, pt.eta * pt.v / std::sqrt(2.0);
  Pi << pt.Pi1, pt.Pi2;
  const double j3 = (su2_generator(2) * phi).dot(Pi).real();
  const double ji = (0.5 * I1 * phi).dot(Pi).real();
  const double dd3 = -j3, ddi = -ji;
  const double dcp = 0.5 * (dd3 + ddi), dcm = 0.5 * (dd3 - ddi);
  r.current_dgamma = 2 * e * dcp;
  const double kap = (g * cw - pt.gp * sw) / (2 * g * pt.gp);
  r.current_dZ = g * pt.gp / e * (dcm + kap * r.current_dgamma);
  return r;
}

GaussReport gauss_singular_reduction(const EWPoint& pt) {
  pt.validate();
  require_stratum(pt);
  GaussReport r;
  r.parts = gauss_algebraic_parts(pt);
  const auto& p = r.parts;
  r.ab_defect = std::max({std::abs(p.a_lhs), std::abs(p.a_rhs), std::abs(p.b_lhs), std::abs(p.b_rhs)});
  r.d_defect = std::max(std::abs(p.d_rhs), std::abs(p.current_dgamma));
  r.c_defect = std::max(std::abs(p.c_coupling), std::abs(p.c_source - p.current_dZ));
  r.collapsed = r.ab_defect < 1e-14 && r.d_defect < 1e-14 && r.c_defect < 1e-12;
  return r;
}

MassReport masses(const EWPoint& pt) {
  pt.validate();
  MassReport r;
  const double v2 = pt.v * pt.v, s2 = pt.s() * pt.s();
  r.mZ_sq = pt.eta * pt.eta * v2 * s2 / 4;
  const double h = 1.0;
  EWPoint a = pt, b = pt;
  a.Z += h;
  b.Z -= h;
  const double f2 = (general_density(a) - 2 * general_density(pt) + general_density(b)) / (h * h);
  r.mZ_sq_fd = 2 * f2 / pt.ell;
  r.eta_coefficient = 2 * pt.lambda * v2 * v2 * (3 * pt.eta * pt.eta - 1);
  r.eta_printed = -4 * pt.lambda * v2;
  return r;
}

double asd_virtual_dim(long p1, long chi_minus_sigma, long dimG) {
  return 2.0 * static_cast<double>(p1) - 0.5 * static_cast<double>(chi_minus_sigma * dimG);
}

void RepVarPoint::validate(double tol) const {
  if (genus < 1) throw Error(ErrorCode::InvalidInput, "genus must be at least 1");
  const std::size_t want = 2 * static_cast<std::size_t>(genus);
  if (abelian) {
    if (u1.size() != want) throw Error(ErrorCode::DimMismatch, "need 2*genus U(1) entries");
    for (const auto& z : u1)
      if (!(std::abs(std::abs(z) - 1.0) <= tol)) throw Error(ErrorCode::InvalidInput, "entry off U(1)");
  } else {
    if (su2.size() != want) throw Error(ErrorCode::DimMismatch, "need 2*genus SU(2) entries");
    for (const auto& a : su2)
      if (!(a.det_defect() <= tol)) throw Error(ErrorCode::InvalidInput, "entry off SU(2)");
  }
}

namespace {

CMat relation_product(const RepVarPoint& pt) {
  if (pt.abelian) {
    cplx r = 1.0;
    for (int i = 0; i < pt.genus; ++i) {
      const cplx a = pt.u1[2 * i], b = pt.u1[2 * i + 1];
      r *= a * b / a / b;
    }
    CMat M(1, 1);
    M(0, 0) = r;
    return M;
  }
  SU2Elem r;
  for (int i = 0; i < pt.genus; ++i) {
    const SU2Elem a = pt.su2[2 * i], b = pt.su2[2 * i + 1];
    r = r * a * b * a.inverse() * b.inverse();
  }
  return r.matrix();
}

Vec flatten(const CMat& M) {
  Vec v(2 * M.size());
  for (Eigen::Index i = 0; i < M.size(); ++i) {
    v(2 * i) = M(i).real();
    v(2 * i + 1) = M(i).imag();
  }
  return v;
}

}  // namespace

CMat relation_map(const RepVarPoint& pt) {
  pt.validate();
  if (pt.abelian) return CMat::Identity(1, 1);
  return relation_product(pt);
}

TangentRank repvar_tangent_rank(const RepVarPoint& pt, double tol, const CMat& target) {
  pt.validate();
  const int n = pt.abelian ? 1 : 2;
  const CMat tgt = target.size() == 0 ? CMat::Identity(n, n) : target;
  require_dim(tgt.rows(), n, "relation target");
  const CMat rel = relation_map(pt);
  if (!((rel - tgt).cwiseAbs().maxCoeff() <= tol))
    throw Error(ErrorCode::OffVariety, "point does not satisfy the surface relation");

  const int dimG = pt.abelian ? 1 : 3;
  const int entries = 2 * pt.genus;
  const double h = 1e-5;
  TangentRank r;
  r.jacobian = Mat::Zero(2 * n * n, entries * dimG);
  for (int j = 0; j < entries; ++j)
    for (int b = 0; b < dimG; ++b) {
      RepVarPoint p = pt, m = pt;
      if (pt.abelian) {
        p.u1[j] *= std::polar(1.0, h);
        m.u1[j] *= std::polar(1.0, -h);
      } else {
        Eigen::Vector3d th = Eigen::Vector3d::Zero();
        th(b) = h;
        p.su2[j] = su2_exp(th) * pt.su2[j];
        m.su2[j] = su2_exp(-th) * pt.su2[j];
      }
      r.jacobian.col(j * dimG + b) = (flatten(relation_product(p)) - flatten(relation_product(m))) / (2 * h);
    }
  Eigen::JacobiSVD<Mat> svd(r.jacobian);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-6) ++r.jacobian_rank;
  r.local_dim = static_cast<long>(entries) * dimG - r.jacobian_rank;
  return r;
}

double sigma_form_u1(cplx a, cplx b, double xi1, double eta1, double xi2, double eta2) {
  if (!(std::abs(std::abs(a) - 1.0) <= 1e-12 && std::abs(std::abs(b) - 1.0) <= 1e-12))
    throw Error(ErrorCode::InvalidInput, "sigma_form_u1 needs unit complex entries");
  return xi1 * eta2 - xi2 * eta1;
}

const char* to_string(OrbitType t) {
  switch (t) {
    case OrbitType::SU2: return "SU2";
    case OrbitType::U1: return "U1";
    case OrbitType::Z2: return "Z2";
  }
  return "?";
}

OrbitType repvar_orbit_type(const RepVarPoint& pt, double tol) {
  pt.validate();
  if (pt.abelian) return OrbitType::U1;
  const long d = su2_commutant_dim(pt.su2, tol);
  return d == 3 ? OrbitType::SU2 : d >= 1 ? OrbitType::U1 : OrbitType::Z2;
}

}  // namespace geomred::gaugealg
