#pragma once

#include "geomred/core.hpp"
#include "geomred/group.hpp"

#include <cstdint>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace geomred::symred {

// ω((q,p),(q′,p′)) = q·p′ − p·q′ on ℝ²ⁿ with coordinates (q₁…qₙ, p₁…pₙ).
Mat canonical_omega(int n);

struct LinearSymplecticSystem {
  std::string name;
  int dim = 0;
  Mat omega;
  std::vector<Mat> generators;
  std::vector<Mat> structure;  // structure[c](a, b) = c^c_ab
  Mat kappa;
  Representation group;  // same generators for continuous kinds

  int k() const { return static_cast<int>(generators.size()); }
  bool abelian() const;
  void validate(double tol = 1e-10) const;
};

// oscillator, su2_c2, torus2, z2_reflection, trivial
LinearSymplecticSystem builtin_system(const std::string& name);
std::vector<std::string> builtin_system_names();

// Components J_a = ½ω(x, ξ_a x), and κ⁻¹ applied to them.
struct MomentumValue {
  Vec pairings;
  Vec components;
};

MomentumValue momentum(const LinearSymplecticSystem& sys, const Vec& x);
// Rows ∇J_a(x)ᵀ by exact differentiation of the quadratic.
Mat momentum_jacobian(const LinearSymplecticSystem& sys, const Vec& x);
double momentum_relation_check(const LinearSymplecticSystem& sys, const Vec& x,
                               const Mat& directions);
// max |J_a(g·x) − J_{Ad(g⁻¹)ξ_a}(x)| over Haar nodes.
double momentum_equivariance_defect(const LinearSymplecticSystem& sys, const Vec& x);

Mat symplectic_orthogonal(const LinearSymplecticSystem& sys, const Mat& V);

// Orthonormal basis of span(B), built by Gram–Schmidt on projected coordinate
// axes so that coordinate subspaces come back as coordinate vectors.
Mat canonical_basis(const Mat& B, double tol = 1e-9);

struct FixedPointDecomposition {
  Mat X_G, complement, restricted_omega;
};
FixedPointDecomposition fixed_point_decomposition(const LinearSymplecticSystem& sys);

struct BifurcationReport {
  Mat ker_DJ, orbit, stabilizer, g_mu, g_mu_orbit;
  double angle_ker = 0;    // Ker DJ vs (𝔤·m)^ω
  double angle_im = 0;     // Im DJ vs annihilator of 𝔤_m
  double angle_isotropic = 0;  // Ker DJ ∩ (Ker DJ)^ω vs 𝔤_μ·m
  bool holds(double tol) const {
    return angle_ker < tol && angle_im < tol && angle_isotropic < tol;
  }
};

// Stabilizer algebra 𝔤_μ of μ = J(m) under the coadjoint action (coefficient columns).
Mat coadjoint_stabilizer(const LinearSymplecticSystem& sys, const Vec& m);
BifurcationReport bifurcation_check(const LinearSymplecticSystem& sys, const Vec& m);

struct WittArtin {
  Mat q_m, g_mu_m, E, F;
  Mat slice;  // T_mS
  long dim_q = 0, dim_g_mu = 0, dim_E = 0, dim_F = 0;
  bool spans = false;
  bool E_symplectic = false;
  long stabilizer_dim = 0;
  bool parity_even = false;
};
WittArtin witt_artin(const LinearSymplecticSystem& sys, const Vec& m);

struct MgsForm {
  Mat stabilizer;                  // coefficient columns of 𝔤_m
  Mat E;                           // orthonormal basis of E
  Mat omega_E;                     // BᵀωB
  std::vector<Mat> generators_E;   // BᵀξB
  std::vector<Mat> forms;          // J_sing(e)_j = eᵀ forms[j] e
  double invariance_defect = 0;    // how far 𝔤_m fails to preserve E

  Vec J_sing(const Vec& e) const;
  // max |J(αe) − α²J(e)| / (α²‖e‖²)
  double scaling_defect(double alpha, const Vec& e) const;
};
MgsForm mgs_at(const LinearSymplecticSystem& sys, const Vec& m);

struct OrbitLabel {
  long stabilizer_dim = 0;
  long finite_order = 1;
  auto operator<=>(const OrbitLabel&) const = default;
};

struct StratumRecord {
  OrbitLabel label;
  std::vector<Vec> sample_points;
  Mat fixed_subspace_basis;
  Mat reduced_form;
  bool reduced_invertible = true;
};

OrbitLabel classify_stabilizer(const LinearSymplecticSystem& sys, const Vec& m);
std::vector<StratumRecord> reduce_zero_level(const LinearSymplecticSystem& sys, int n_samples,
                                             std::uint64_t seed);

MomentumValue cotangent_lift_momentum(const std::vector<Mat>& base_generators, const Vec& x,
                                      const Vec& alpha);

}  // namespace geomred::symred
