#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qperm {

using Scalar = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<Scalar>;

/// Default tolerance for algebraic identities.
inline constexpr double kAlgebraTol = 1e-9;
/// Default tolerance for iterative limits (meets, Cesaro means).
inline constexpr double kIterativeTol = 1e-7;
/// Relative width used to group numerically repeated eigenvalues.
inline constexpr double kClusterTol = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlgebraMismatch : public Error {
 public:
  AlgebraMismatch() : Error("operands live in different algebras") {}
};

/// Input does not describe a valid model (bad table, failed axiom, ...).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// A numerical postcondition could not be certified.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

}  // namespace qperm
