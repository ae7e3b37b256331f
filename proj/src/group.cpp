#include "geomred/group.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <numbers>

namespace geomred {

std::string CompactGroupSpec::name() const {
  switch (kind) {
    case GroupKind::Finite: return order == 1 ? "trivial" : "finite(" + std::to_string(order) + ")";
    case GroupKind::Torus: return "torus(" + std::to_string(rank) + ")";
    case GroupKind::SU2: return "SU2";
  }
  return "unknown";
}

std::vector<Eigen::Vector4d> binary_icosahedral() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector4d> out;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) {
      Eigen::Vector4d q = Eigen::Vector4d::Zero();
      q(i) = s;
      out.push_back(q);
    }
  for (int m = 0; m < 16; ++m) {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = (m >> i & 1) ? -0.5 : 0.5;
    out.push_back(q);
  }
  // even permutations of (±φ/2, ±1/2, ±1/(2φ), 0)
  const std::array<std::array<int, 4>, 12> even = {{{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2},
                                                     {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 3, 2, 0},
                                                     {2, 0, 1, 3}, {2, 1, 3, 0}, {2, 3, 0, 1},
                                                     {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}}};
  const double base[4] = {phi / 2, 0.5, 1.0 / (2 * phi), 0.0};
  for (const auto& p : even)
    for (int m = 0; m < 8; ++m) {
      double v[4] = {base[0] * ((m & 1) ? -1 : 1), base[1] * ((m & 2) ? -1 : 1),
                     base[2] * ((m & 4) ? -1 : 1), 0.0};
      Eigen::Vector4d q;
      for (int i = 0; i < 4; ++i) q(p[i]) = v[i];
      out.push_back(q);
    }
  return out;
}

Vec su2_coords(const Eigen::Vector4d& q) {
  const Eigen::Vector3d v = q.tail<3>();
  const double s = v.norm();
  Vec th = Vec::Zero(3);
  if (s < 1e-15) {
    // ±1: exp(2π t₃) = −1
    if (q(0) < 0) th(2) = 2 * std::numbers::pi;
    return th;
  }
  const double phi = 2.0 * std::atan2(s, q(0));
  return phi * v / s;
}

std::vector<HaarNode> haar_nodes(const CompactGroupSpec& g) {
  std::vector<HaarNode> out;
  switch (g.kind) {
    case GroupKind::Finite:
      for (int i = 0; i < g.order; ++i) out.push_back({{i, Vec()}, 1.0 / g.order});
      break;
    case GroupKind::Torus: {
      const int N = g.haar_nodes;
      long total = 1;
      for (int i = 0; i < g.rank; ++i) total *= N;
      for (long idx = 0; idx < total; ++idx) {
        Vec th(g.rank);
        long r = idx;
        for (int i = 0; i < g.rank; ++i) {
          th(i) = 2 * std::numbers::pi * static_cast<double>(r % N) / N;
          r /= N;
        }
        out.push_back({{0, th}, 1.0 / static_cast<double>(total)});
      }
      break;
    }
    case GroupKind::SU2: {
      const auto qs = binary_icosahedral();
      for (const auto& q : qs) out.push_back({{0, su2_coords(q)}, 1.0 / qs.size()});
      break;
    }
  }
  return out;
}

int Representation::dim() const {
  if (!elements.empty()) return static_cast<int>(elements[0].rows());
  if (!generators.empty()) return static_cast<int>(generators[0].rows());
  return 0;
}

Mat Representation::algebra_element(const Vec& theta) const {
  Mat X = Mat::Zero(dim(), dim());
  for (std::size_t a = 0; a < generators.size(); ++a) X += theta(a) * generators[a];
  return X;
}

Mat Representation::element(const GroupPoint& g) const {
  if (group.kind == GroupKind::Finite) return elements.at(g.index);
  if (group.kind == GroupKind::Torus) {
    // commuting generators: product of one-parameter factors
    Mat M = Mat::Identity(dim(), dim());
    for (std::size_t a = 0; a < generators.size(); ++a) {
      Mat X = g.theta(a) * generators[a];
      M = M * Mat(X.exp());
    }
    return M;
  }
  Mat X = algebra_element(g.theta);
  return X.exp();
}

void Representation::validate(double tol) const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidInput, m); };
  const int n = dim();
  switch (group.kind) {
    case GroupKind::Finite: {
      if (static_cast<int>(elements.size()) != group.order) fail("finite group order mismatch");
      for (const auto& e : elements) {
        require_finite(e, "group element");
        if (e.rows() != n || e.cols() != n) fail("group element shape mismatch");
      }
      if ((elements[0] - Mat::Identity(n, n)).norm() > tol) fail("first group element must be identity");
      for (const auto& a : elements)
        for (const auto& b : elements) {
          const Mat ab = a * b;
          bool found = false;
          for (const auto& c : elements)
            if ((ab - c).norm() <= tol * (1 + ab.norm())) {
              found = true;
              break;
            }
          if (!found) fail("finite group list not closed under products");
        }
      break;
    }
    case GroupKind::Torus: {
      if (static_cast<int>(generators.size()) != group.rank) fail("torus rank mismatch");
      for (const auto& X : generators) {
        require_finite(X, "generator");
        Mat E = Mat(2 * std::numbers::pi * X).exp();
        if ((E - Mat::Identity(n, n)).norm() > 1e3 * tol) fail("torus generator is not 2pi-periodic");
      }
      for (const auto& X : generators)
        for (const auto& Y : generators)
          if ((X * Y - Y * X).norm() > tol) fail("torus generators must commute");
      break;
    }
    case GroupKind::SU2: {
      if (generators.size() != 3) fail("SU2 representation needs three generators");
      // [t_a, t_b] = −ε_abc t_c
      for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        const Mat comm = generators[a] * generators[b] - generators[b] * generators[a];
        if ((comm + generators[c]).norm() > tol * (1 + generators[c].norm()))
          fail("SU2 generators violate su(2) relations");
      }
      break;
    }
  }
}

Representation Representation::trivial(int dim) {
  Representation r;
  r.group = CompactGroupSpec::trivial();
  r.elements = {Mat::Identity(dim, dim)};
  return r;
}

Mat haar_conjugate_average(const Representation& left, const Representation& right, const Mat& A) {
  Mat sum = Mat::Zero(A.rows(), A.cols());
  for (const auto& node : haar_nodes(left.group)) {
    const Mat L = left.element(node.g);
    const Mat Rinv = right.element(node.g).inverse();
    sum += node.weight * L * A * Rinv;
  }
  return sum;
}

}  // namespace geomred
