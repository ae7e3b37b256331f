#pragma once

#include "geomred/core.hpp"

#include <string>
#include <vector>

namespace geomred {

enum class GroupKind { Finite, Torus, SU2 };

// A point of the group: an index (finite kinds) or algebra coordinates θ with
// element exp(Σ θ_a ξ_a) (continuous kinds).
struct GroupPoint {
  int index = 0;
  Vec theta;
};

struct HaarNode {
  GroupPoint g;
  double weight = 0;
};

struct CompactGroupSpec {
  GroupKind kind = GroupKind::Finite;
  int order = 1;        // finite kinds
  int rank = 0;         // torus angles
  int haar_nodes = 64;  // per angle, torus kinds

  static CompactGroupSpec trivial() { return {}; }
  static CompactGroupSpec finite(int order) { return {GroupKind::Finite, order, 0, 64}; }
  static CompactGroupSpec torus(int rank, int nodes = 64) {
    return {GroupKind::Torus, 1, rank, nodes};
  }
  static CompactGroupSpec su2() { return {GroupKind::SU2, 1, 3, 64}; }

  int algebra_dim() const {
    return kind == GroupKind::Finite ? 0 : (kind == GroupKind::Torus ? rank : 3);
  }
  std::string name() const;
};

// Haar quadrature: exact averaging for finite groups, tensor trapezoid for
// tori, and the binary icosahedral group for SU(2).
std::vector<HaarNode> haar_nodes(const CompactGroupSpec& g);

// Unit quaternions (w, x, y, z) of the binary icosahedral group.
std::vector<Eigen::Vector4d> binary_icosahedral();

// Algebra coordinates θ of a unit quaternion w + v, so that the element is
// exp(Σ θ_a t_a) with t_a = iσ_a/2.
Vec su2_coords(const Eigen::Vector4d& q);

// Linear representation of a compact group on ℝⁿ.
struct Representation {
  CompactGroupSpec group;
  std::vector<Mat> elements;    // finite kinds, elements[0] = identity
  std::vector<Mat> generators;  // continuous kinds

  int dim() const;
  Mat element(const GroupPoint& g) const;
  Mat algebra_element(const Vec& theta) const;
  // Closure (finite), periodicity exp(2πξ) = I (torus), su(2) relations (SU2).
  void validate(double tol) const;

  static Representation trivial(int dim);
};

// Σ w · g · A · g⁻¹ over the Haar nodes, with separate representations on the
// target (left) and source (right) side.
Mat haar_conjugate_average(const Representation& left, const Representation& right, const Mat& A);

}  // namespace geomred
