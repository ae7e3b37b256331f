#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace geomred {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

enum class ErrorCode {
  NonFinite,
  SingularExtension,
  SingularB22,
  ShapeMismatch,
  GridTooCoarse,
  NewtonDivergence,
  KerTooLarge,
  NotEquivariant,
  DimMismatch,
  DegenerateRestriction,
  NoSamplesFound,
  OffConstraint,
  QZero,
  NonPositiveQbar,
  BadCouplings,
  OffStratum,
  OffVariety,
  InvalidInput,
};

const char* to_string(ErrorCode c);

// Validation errors reject the input; numerical errors mean the input was
// well formed but the computation could not certify its result.
inline bool is_validation(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonFinite:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::KerTooLarge:
    case ErrorCode::NotEquivariant:
    case ErrorCode::DimMismatch:
    case ErrorCode::OffConstraint:
    case ErrorCode::QZero:
    case ErrorCode::NonPositiveQbar:
    case ErrorCode::BadCouplings:
    case ErrorCode::OffStratum:
    case ErrorCode::OffVariety:
    case ErrorCode::InvalidInput:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct TolerancePolicy {
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;

  void validate() const {
    if (!(rank_tol > 0 && rank_tol < 1 && residual_tol > 0 && residual_tol < 1))
      throw Error(ErrorCode::InvalidInput, "tolerances must lie in (0, 1)");
  }
};

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite())
    throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want)
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": expected dimension " +
                                            std::to_string(want) + ", got " +
                                            std::to_string(got));
}

}  // namespace geomred
