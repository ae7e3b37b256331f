#include "geomred/linops.hpp"

#include <cmath>
#include <numbers>

namespace geomred {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularExtension: return "SingularExtension";
    case ErrorCode::SingularB22: return "SingularB22";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::KerTooLarge: return "KerTooLarge";
    case ErrorCode::NotEquivariant: return "NotEquivariant";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorCode::NoSamplesFound: return "NoSamplesFound";
    case ErrorCode::OffConstraint: return "OffConstraint";
    case ErrorCode::QZero: return "QZero";
    case ErrorCode::NonPositiveQbar: return "NonPositiveQbar";
    case ErrorCode::BadCouplings: return "BadCouplings";
    case ErrorCode::OffStratum: return "OffStratum";
    case ErrorCode::OffVariety: return "OffVariety";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace geomred

namespace geomred::linops {

namespace {

std::vector<Mat> evaluate_all(const OperatorFamily& F, Mat& T0) {
  if (!F.eval) throw Error(ErrorCode::InvalidInput, "operator family has no evaluator");
  T0 = F.eval(F.base);
  std::vector<Mat> out;
  out.reserve(F.grid.size());
  for (const auto& p : F.grid) {
    Mat Tp = F.eval(p);
    if (Tp.rows() != T0.rows() || Tp.cols() != T0.cols())
      throw Error(ErrorCode::ShapeMismatch, "family members have different shapes");
    out.push_back(std::move(Tp));
  }
  return out;
}

}  // namespace

RegularityReport family_uniform_regular(const OperatorFamily& F, const TolerancePolicy& tol) {
  Mat T0;
  const auto Ts = evaluate_all(F, T0);
  const auto f0 = rank_factorize(T0, tol);
  RegularityReport rep;
  rep.base_rank = f0.rank;
  const double scale = std::max(f0.sigma_max, 1e-300);

  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const Mat& Tp = Ts[i];
    RegularityPoint pt;
    pt.param = F.grid[i];

    const Mat tilde = f0.im_basis.transpose() * Tp * f0.coim_basis;
    if (tilde.size() > 0) {
      Eigen::JacobiSVD<Mat> svd(tilde, Eigen::ComputeFullV);
      const Vec sv = svd.singularValues();
      const double thresh = tol.rank_tol * std::max(sv(0), scale);
      Eigen::Index r = 0;
      while (r < sv.size() && sv(r) > thresh) ++r;
      pt.tilde_invertible = (r == tilde.cols());
      pt.core_condition = pt.tilde_invertible ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
      const Mat kv = svd.matrixV().rightCols(tilde.cols() - r);
      pt.tilde_kernel = f0.coim_basis * kv;
      pt.kernel_residual = kv.cols() ? opnorm(Mat(tilde * kv)) : 0.0;
    } else {
      pt.tilde_kernel = Mat(T0.cols(), 0);
    }

    const auto fp = rank_factorize(Tp, tol);
    pt.ker_angle = containment_defect(fp.ker_basis, f0.ker_basis);
    pt.im_angle = containment_defect(f0.im_basis, fp.im_basis);
    pt.ker_contained = pt.ker_angle < tol.residual_tol;
    pt.im_contains = pt.im_angle < tol.residual_tol;

    rep.uniformly_regular = rep.uniformly_regular && pt.tilde_invertible;
    rep.semicontinuous = rep.semicontinuous && pt.ker_contained && pt.im_contains;
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

IndexStabilityReport index_stability(const OperatorFamily& F, const TolerancePolicy& tol) {
  Mat T0;
  const auto Ts = evaluate_all(F, T0);
  IndexStabilityReport rep;
  rep.base_index = fredholm_index(T0, tol);
  for (const Mat& Tp : Ts) {
    const auto f = rank_factorize(Tp, tol);
    const long k = f.ker_basis.cols(), c = f.coker_basis.cols();
    rep.ker_dims.push_back(k);
    rep.coker_dims.push_back(c);
    rep.indices.push_back(k - c);
    rep.stable = rep.stable && (k - c == rep.base_index);
  }
  return rep;
}

OperatorFamily dilation_family(int degree, std::vector<double> grid) {
  if (degree < 0) throw Error(ErrorCode::InvalidInput, "degree must be non-negative");
  OperatorFamily F;
  F.param_dim = 1;
  F.base = Vec::Zero(1);
  // L_r(x^k) = (1 − r·k)·x^k
  F.eval = [degree](const Vec& p) {
    Mat L = Mat::Zero(degree + 1, degree + 1);
    for (int k = 0; k <= degree; ++k) L(k, k) = 1.0 - p(0) * k;
    return L;
  };
  for (double r : grid) F.grid.push_back(Vec::Constant(1, r));
  return F;
}

// ---------------------------------------------------------------------------

BvpDiscretization bvp_green(int n) {
  if (n < 8) throw Error(ErrorCode::GridTooCoarse, "bvp grid needs n >= 8");
  BvpDiscretization d;
  d.n = n;
  d.h = 1.0 / (n - 1);
  d.x = Vec::LinSpaced(n, 0.0, 1.0);
  d.weights = Vec::Constant(n, d.h);
  d.weights(0) = d.weights(n - 1) = 0.5 * d.h;
  return d;
}

Mat BvpDiscretization::T_matrix() const {
  Mat T = Mat::Zero(n, n);
  const double s = 1.0 / (h * h);
  for (int i = 1; i + 1 < n; ++i) {
    T(i, i - 1) = s;
    T(i, i) = -2 * s;
    T(i, i + 1) = s;
  }
  const double c[5] = {35, -104, 114, -56, 11};
  for (int k = 0; k < 5; ++k) {
    T(0, k) = c[k] * s / 12;
    T(n - 1, n - 1 - k) = c[k] * s / 12;
  }
  return T;
}

Vec BvpDiscretization::apply_T(const Vec& u) const {
  require_dim(u.size(), n, "grid function");
  return T_matrix() * u;
}

Vec BvpDiscretization::apply_S(const Vec& f) const {
  require_dim(f.size(), n, "grid function");
  // F(x) = ∫₀ˣ f, G(x) = ∫₀ˣ t f(t), cumulative trapezoid
  Vec F = Vec::Zero(n), G = Vec::Zero(n);
  for (int i = 1; i < n; ++i) {
    F(i) = F(i - 1) + 0.5 * h * (f(i - 1) + f(i));
    G(i) = G(i - 1) + 0.5 * h * (x(i - 1) * f(i - 1) + x(i) * f(i));
  }
  Vec S(n);
  for (int i = 0; i < n; ++i)
    S(i) = x(i) * F(i) - G(i) - 0.5 * (x(i) * x(i) + 1.0) * F(n - 1) + G(n - 1);
  return S;
}

double BvpDiscretization::neumann_defect(const Vec& u) const {
  require_dim(u.size(), n, "grid function");
  const double d0 = (-3 * u(0) + 4 * u(1) - u(2)) / (2 * h);
  const double d1 = (3 * u(n - 1) - 4 * u(n - 2) + u(n - 3)) / (2 * h);
  return std::max(std::abs(d0), std::abs(d1));
}

Vec BvpDiscretization::sample(const std::function<double(double)>& g) const {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(x(i));
  return v;
}

BvpErrors bvp_errors(const BvpDiscretization& d) {
  using std::numbers::pi;
  BvpErrors e;
  e.n = d.n;
  e.h = d.h;
  const Vec u = d.sample([](double x) { return std::cos(pi * x); });
  const Vec upp = d.sample([](double x) { return -pi * pi * std::cos(pi * x); });
  const Vec target_a = u.array() + 1.0;  // u − u(1)
  e.err_a = (d.apply_S(upp) - target_a).lpNorm<Eigen::Infinity>();
  e.err_a_composite = (d.apply_S(d.apply_T(u)) - target_a).lpNorm<Eigen::Infinity>();

  const Vec& f = u;  // mean zero, so f − ∫f = f
  e.err_b = (d.apply_T(d.apply_S(f)) - f).lpNorm<Eigen::Infinity>();
  e.s_of_one = d.apply_S(Vec::Ones(d.n)).lpNorm<Eigen::Infinity>();
  const Vec closed = d.sample([](double x) { return (-std::cos(pi * x) - 1.0) / (pi * pi); });
  e.closed_form = (d.apply_S(f) - closed).lpNorm<Eigen::Infinity>();
  return e;
}

}  // namespace geomred::linops
