#pragma once

#include "geomred/core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geomred::cotred {

struct OscState {
  double q1 = 0, q2 = 0, p1 = 0, p2 = 0;

  Eigen::Vector2d q() const { return {q1, q2}; }
  Eigen::Vector2d p() const { return {p1, p2}; }
  Eigen::Vector4d vec() const { return {q1, q2, p1, p2}; }
  static OscState from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
};

struct ConePoint {
  double e_plus = 0, e_minus = 0, h = 0;
  Eigen::Vector3d vec() const { return {e_plus, e_minus, h}; }
  // h² − e₊² − e₋²
  double cone_defect() const { return h * h - e_plus * e_plus - e_minus * e_minus; }
};

enum class SeamId { PP_SINGULAR, LINE, TOP };
const char* to_string(SeamId s);

inline constexpr double kSeamTol = 1e-9;

ConePoint K_map(const OscState& s);
double angular_momentum(const OscState& s);
double hamiltonian(const OscState& s);

// Canonical bracket {f, g} = ∂_p f·∂_q g − ∂_q f·∂_p g; with it ḟ = {H, f}.
// Returns the max defect of {H,E₊} = −2E₋, {H,E₋} = 2E₊, {E₊,E₋} = 2H.
double poisson_check(const std::vector<OscState>& samples);
// The same relations for the components of I under the T*ℝ₊ bracket.
double poisson_check_I(const std::vector<std::array<double, 2>>& samples);

SeamId seam_classify(const OscState& s, double tol = kSeamTol);

std::array<double, 2> psi_reduce(const OscState& s, double tol = kSeamTol);
ConePoint I_map(double q_bar, double p_bar);

// Flow of X_H on the cone: counterclockwise rotation by 2t in (E₊, E₋).
ConePoint cone_flow(const ConePoint& c0, double t);

struct TstarValue {
  bool blowup = false;
  double q_bar = 0, p_bar = 0;
};
TstarValue tstar_flow(double H0_bar, double t0, double t, double blowup_window = 1e-6);
// Blow-up times π/2 + kπ − t₀ in [t_lo, t_hi].
std::vector<double> blowup_times(double t0, double t_lo, double t_hi);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<OscState> states;
  double dt = 0;
  std::string method = "rk4";
};
FlowTrajectory oscillator_rk4(const OscState& s0, double t_end, double dt, int sample_every = 1);

struct FrontierReport {
  struct Sequence {
    std::string name;
    SeamId upper = SeamId::TOP, lower = SeamId::TOP;
    bool labels_ok = true;
    double final_distance = 0;
    bool converges = true;
  };
  std::vector<Sequence> sequences;
  std::vector<std::pair<SeamId, SeamId>> realized;  // (upper, lower), upper ≠ lower
  bool matches_expected = false;
};
FrontierReport seam_frontier_check(int n_samples, std::uint64_t seed);

}  // namespace geomred::cotred
