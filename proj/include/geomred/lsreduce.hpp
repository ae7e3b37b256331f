#pragma once

#include "geomred/core.hpp"
#include "geomred/group.hpp"
#include "geomred/linops.hpp"

#include <functional>
#include <string>
#include <vector>

namespace geomred::lsreduce {

struct SmoothMapHandle {
  int dim_in = 0;
  int dim_out = 0;
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jacobian;  // optional
  double fd_step = 1e-6;

  Vec operator()(const Vec& x) const;
  Mat jac(const Vec& x) const;
  Mat fd_jacobian(const Vec& x) const;
  bool analytic() const { return static_cast<bool>(jacobian); }
};

// Relative mismatch between the analytic and finite-difference Jacobians.
double jacobian_fd_check(const SmoothMapHandle& f, const Vec& x);
inline constexpr double fd_check_tol = 1e-4;

// Monomial term coef · Π x_i^powers[i].
struct PolyTerm {
  double coef = 0;
  std::vector<int> powers;
};
SmoothMapHandle polynomial_map(int dim_in, const std::vector<std::vector<PolyTerm>>& components);

// circle, angular_momentum, odd_cubic, radial, projection, square
SmoothMapHandle builtin_map(const std::string& name);
std::vector<std::string> builtin_map_names();

struct ValidationStats {
  int samples = 0;
  double diagram_residual = 0;  // max over samples, relative to 1 + ‖f‖
  double roundtrip_error = 0;   // max ‖ψ⁻¹(ψ(x)) − x‖
  double equivariance_defect = 0;
};

// All maps act on displacements from the base point, except φ, whose output
// is an absolute value of f.
struct NormalFormCharts {
  SmoothMapHandle f;
  TolerancePolicy tol;
  Vec base, f_base;
  Mat T;
  linops::RankFactorization<double> fact;
  Mat pr_ker, pr_coim, pr_im, pr_coker;  // complementary pairs, oblique when equivariant
  Mat S;                                 // T̂⁻¹ ∘ pr_Im
  Mat ker_basis, coker_basis;            // orthonormal bases of Ker and Coker
  double box_radius = 0;
  ValidationStats stats;

  Eigen::Index dim_ker() const { return ker_basis.cols(); }
  Eigen::Index dim_coker() const { return coker_basis.cols(); }
  Eigen::Index rank() const { return fact.rank; }

  Vec psi(const Vec& x) const;
  Mat dpsi(const Vec& x) const;
  bool try_psi_inv(const Vec& z, Vec& x) const;
  Vec psi_inv(const Vec& z) const;
  Vec phi(const Vec& y) const;
  Vec f_hat(const Vec& z) const { return T * (pr_coim * z); }
  Vec f_sing(const Vec& z) const;
  Vec f_nf(const Vec& z) const { return f_hat(z) + f_sing(z); }
  // s(c) = coordinates of f_sing(K c) in the Coker basis.
  Vec reduced(const Vec& c) const;
  Mat reduced_jacobian(const Vec& c) const;
};

struct BuildOptions {
  std::uint64_t seed = 0;
  int samples = 128;
  double start_radius = 1.0;
  double min_radius = 1e-6;
};

NormalFormCharts build_normal_form(const SmoothMapHandle& f, const Vec& m,
                                   const TolerancePolicy& tol = {}, const BuildOptions& opt = {});

enum class PointClass { SUBMERSION, IMMERSION, SUBIMMERSION, SINGULAR };
const char* to_string(PointClass c);

struct RankCensus {
  std::vector<long> ranks;
  double max_f_sing = 0;
};
RankCensus rank_census(const NormalFormCharts& nf, int samples, std::uint64_t seed);

PointClass classify_point(const NormalFormCharts& nf, std::uint64_t seed = 0);
PointClass classify_point(const SmoothMapHandle& f, const Vec& m, const TolerancePolicy& tol = {},
                          std::uint64_t seed = 0);

struct ReducedSolution {
  std::vector<Vec> coords;  // Ker coordinates c
  std::vector<Vec> points;  // ambient displacements K c
  long grid_points = 0;
  double spacing = 0;
};

ReducedSolution reduced_equation_solve(const NormalFormCharts& nf, int grid_res);

// Group acting linearly on domain and codomain; the base point must be fixed.
struct GroupActionPair {
  Representation domain, codomain;
};

NormalFormCharts equivariant_normal_form(const SmoothMapHandle& f, const Vec& m,
                                         const GroupActionPair& H, const TolerancePolicy& tol = {},
                                         const BuildOptions& opt = {});

// Max ‖f_sing(h·z) − h·f_sing(z)‖ over all Haar nodes and `samples` box points.
double f_sing_equivariance_defect(const NormalFormCharts& nf, const GroupActionPair& H,
                                  int samples, std::uint64_t seed);

struct KuranishiChartFD {
  NormalFormCharts nf;
  CompactGroupSpec H;
  Mat V_basis;  // Ker
  Mat F_basis;  // Coker
  double V_radius = 0;
  std::vector<Vec> chart_points;  // level-set samples of f, as absolute points
  double s_at_zero = 0;
  double s_equivariance_defect = 0;
  double coim_defect = 0;  // max ‖pr_Coim ψ(y − m)‖ over chart points
  double s_defect = 0;     // max ‖s(pr_Ker ψ(y − m))‖ over chart points
  long virtual_dim = 0;

  Vec s(const Vec& c) const { return nf.reduced(c); }
};

KuranishiChartFD kuranishi_chart(const SmoothMapHandle& f, const Vec& m, const GroupActionPair& H,
                                 const TolerancePolicy& tol = {}, const BuildOptions& opt = {},
                                 int level_samples = 64);

inline long virtual_dimension(long dimE, long dimF, long dimH) { return dimE - dimF - dimH; }

}  // namespace geomred::lsreduce
