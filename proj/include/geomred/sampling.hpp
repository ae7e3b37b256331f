#pragma once

#include "geomred/core.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace geomred {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  double uniform(double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  Vec normal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Mat normal_mat(Eigen::Index r, Eigen::Index c) {
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Halton sequence with a seed-derived Cranley–Patterson shift.
class Halton {
 public:
  Halton(int dim, std::uint64_t seed) : dim_(dim), shift_(dim) {
    if (dim > kMaxDim) throw Error(ErrorCode::InvalidInput, "Halton dimension too large");
    Rng r(seed);
    for (int i = 0; i < dim; ++i) shift_(i) = seed == 0 ? 0.0 : r.uniform();
  }

  Vec next() {
    ++index_;
    Vec v(dim_);
    for (int i = 0; i < dim_; ++i) {
      double u = radical_inverse(index_, kPrimes[i]) + shift_(i);
      v(i) = u - std::floor(u);
    }
    return v;
  }

  // Point in the box [−r, r]^dim.
  Vec next_in_box(double r) { return (2.0 * next().array() - 1.0) * r; }

 private:
  static constexpr int kMaxDim = 16;
  static constexpr int kPrimes[kMaxDim] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

  static double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
      r += f * static_cast<double>(i % base);
      i /= base;
      f *= inv;
    }
    return r;
  }

  int dim_;
  std::uint64_t index_ = 0;
  Vec shift_;
};

}  // namespace geomred
