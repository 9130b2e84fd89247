#pragma once

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <string>

namespace lorentz {

// Every shipped spacetime has dimension <= 4, so vectors and matrices live on
// the stack with a dynamic size bounded by kMaxDim.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

// Chart coordinates of a point. Tangent vectors use the same representation.
using Event = Vec;
using Tangent = Vec;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ClassificationError : public Error {
 public:
  using Error::Error;
};

class DegenerateCurveError : public Error {
 public:
  using Error::Error;
};

class IncompatibleError : public Error {
 public:
  using Error::Error;
};

class InvalidTriangleError : public Error {
 public:
  using Error::Error;
};

class DiameterError : public Error {
 public:
  using Error::Error;
};

class IntegratorError : public Error {
 public:
  using Error::Error;
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace lorentz
