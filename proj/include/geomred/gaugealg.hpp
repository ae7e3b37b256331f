#pragma once

#include "geomred/core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace geomred::gaugealg {

// [[α, −β̄], [β, ᾱ]]
struct SU2Elem {
  cplx alpha{1.0, 0.0}, beta{0.0, 0.0};

  CMat matrix() const;
  SU2Elem inverse() const { return {std::conj(alpha), -beta}; }
  SU2Elem operator*(const SU2Elem& o) const;
  double det_defect() const { return std::abs(std::norm(alpha) + std::norm(beta) - 1.0); }
  static SU2Elem from_matrix(const CMat& M);
};

// exp(θ_a t_a) with t_a = iσ_a/2
SU2Elem su2_exp(const Eigen::Vector3d& theta);
const std::array<CMat, 3>& pauli();
CMat su2_generator(int a);  // t_a

// Subgroups of SU(2) (up to conjugacy) and U(1).
enum class Sym { E, Z2, Zn, Z2n, U1, SU2 };

struct Subgroup {
  Sym sym = Sym::E;
  int n = 0;            // parameter of Zn / Z2n; 0 keeps it symbolic
  char letter = 'p';    // symbol used in labels when n == 0

  std::string label() const;
  bool contains(const Subgroup& o) const;
};

enum class SU2Class { TRIVIAL_OR_Z2, Z2, U1, SU2 };
const char* to_string(SU2Class c);
std::string display(SU2Class c);

struct HoweRecord {
  SU2Class holonomy, stabilizer, howe;
};

std::vector<HoweRecord> su2_centralizer_table();

// Numerical check that the centralizer in SU(2) of a sample set is the claimed
// subgroup: claimed elements commute with the samples, elements of the sampled
// centralizer lie in the claimed subgroup, and elements away from it do not commute.
struct CentralizerCheck {
  double commute_defect = 0;
  double membership_defect = 0;
  long commutant_dim = 0, expected_dim = 0;
  double outside_min_defect = 0;  // infinity when the claim is all of SU(2)
  bool ok = false;
};
CentralizerCheck check_centralizer(const std::vector<SU2Elem>& generators, SU2Class claimed,
                                   std::uint64_t seed, int samples = 200, double tol = 1e-10);

struct HoweRecordCheck {
  HoweRecord record;
  CentralizerCheck stabilizer, howe;
};
std::vector<HoweRecordCheck> verify_centralizer_table(std::uint64_t seed, int samples = 200);

std::vector<std::string> howe_product(const std::vector<SU2Class>& su2_howe);
std::vector<std::string> howe_product_enumerate();

enum class Theta { Trivial, IdZ2, Power };

struct GoursatTuple {
  SU2Class howe = SU2Class::SU2;
  Subgroup G1, G2, L1, L2;
  Theta theta = Theta::Trivial;
  int k = 0;  // exponent of the power map; 0 keeps it symbolic
  bool unenumerated = false;

  std::string howe_label() const;
  std::string theta_label() const;
  // Normality of G2 in G1 and L2 in L1, and θ : G1/G2 → L1/L2 matching quotient types.
  bool symbolic_valid() const;
};

std::vector<GoursatTuple> goursat_families();
std::vector<GoursatTuple> goursat_enumerate(int param_bound);

struct GoursatCheck {
  GoursatTuple tuple;
  CentralizerCheck centralizer;
  double relation_defect = 0;  // how far sampled (g, l) miss θ(gG₂) = lL₂
  bool symbolic_ok = false;
  bool ok = false;
};
// Samples H′ per θ(gG₂) = lL₂ and checks C(H′) = H in both directions.
GoursatCheck verify_goursat(const GoursatTuple& t, std::uint64_t seed, int samples = 200);

std::string format_holonomy_table(const std::vector<HoweRecord>& rows);
std::string format_howe_table(const std::vector<GoursatTuple>& families);

struct ConjugateK {
  CMat matrix;
  bool in_K = false;
};
ConjugateK conjugate_K(const SU2Elem& a, double theta);

enum class PairStabilizer { K, Z2 };
const char* to_string(PairStabilizer s);
PairStabilizer stabilizer_pair(const std::vector<cplx>& beta_samples, double tol = 1e-12);

struct EWPoint {
  double g = 0.65, gp = 0.35;
  double lambda = 0.13, v = 1.0, ell = 1.0;
  double W1 = 0, W2 = 0, W3 = 0, B = 0;
  cplx W_plus{}, W_minus{};
  double Z = 0, A_gamma = 0;
  cplx D_plus{}, D_minus{};
  double D_Z = 0, D_gamma = 0;
  double eta = 1.0;
  cplx Pi1{}, Pi2{};
  double dAgamma = 0, dZ = 0, deta = 0;

  double s() const { return std::hypot(g, gp); }
  double e() const { return g * gp / s(); }
  double cos_w() const { return g / s(); }
  double sin_w() const { return gp / s(); }
  void validate() const;
};

enum class Direction { Forward, Inverse };
EWPoint ew_basis_change(const EWPoint& pt, Direction dir);

double ew_commutators_check();

struct DensityReport {
  double general = 0, reduced = 0;
  double D_general = 0, D_reduced = 0;
  double F_general = 0, F_reduced = 0;
  double higgs_general = 0, higgs_reduced = 0;
  double potential = 0;
  double printed_potential_term = 0;
  double max_defect = 0;
};

// Pointwise density of the full Hamiltonian in the original fields (W, B, D, φ, Π),
// evaluated with κ and κ⁻¹. The point's after-breaking fields are mapped back first.
double general_density(const EWPoint& pt);
double reduced_density(const EWPoint& pt);
DensityReport singular_hamiltonian_identity(const EWPoint& pt);

struct GaussParts {
  cplx a_lhs, a_rhs, b_lhs, b_rhs;
  cplx c_coupling, d_rhs;
  double c_source = 0;
  double current_dZ = 0, current_dgamma = 0;  // from the Higgs current and d_A D + φ⋄Π = 0
};
GaussParts gauss_algebraic_parts(const EWPoint& pt);

struct GaussReport {
  GaussParts parts;
  double ab_defect = 0, d_defect = 0, c_defect = 0;
  bool collapsed = false;
};
GaussReport gauss_singular_reduction(const EWPoint& pt);

struct MassReport {
  double mZ_sq = 0, mZ_sq_fd = 0;
  double eta_coefficient = 0;  // ∂²(2V)/∂η² at the point
  double eta_printed = 0;      // −4λv²
};
MassReport masses(const EWPoint& pt);

double asd_virtual_dim(long p1, long chi_minus_sigma, long dimG);

struct RepVarPoint {
  int genus = 1;
  bool abelian = false;
  std::vector<SU2Elem> su2;  // a₁, b₁, a₂, b₂, …
  std::vector<cplx> u1;

  void validate(double tol = 1e-12) const;
};

CMat relation_map(const RepVarPoint& pt);

struct TangentRank {
  long jacobian_rank = 0;
  long local_dim = 0;
  Mat jacobian;
};
TangentRank repvar_tangent_rank(const RepVarPoint& pt, double tol, const CMat& target = CMat());

double sigma_form_u1(cplx a, cplx b, double xi1, double eta1, double xi2, double eta2);

enum class OrbitType { SU2, U1, Z2 };
const char* to_string(OrbitType t);
long su2_commutant_dim(const std::vector<SU2Elem>& elems, double tol = 1e-9);
OrbitType repvar_orbit_type(const RepVarPoint& pt, double tol = 1e-9);

}  // namespace geomred::gaugealg
