#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "bakry/discretize.hpp"

namespace bakry {

enum class EigenMethod { Auto, Dense, ShiftInvert };

std::string to_string(EigenMethod m);

struct EigenOptions {
  int count = 1;
  double tol = 1e-8;
  /// Restrict to the B-orthogonal complement of the all-ones vector.
  bool deflate_constant = false;
  EigenMethod method = EigenMethod::Auto;
  /// Auto switches to shift-invert above this size.
  int dense_limit = 2500;
  /// Shift for shift-invert; NaN picks one below the spectrum automatically.
  double shift = std::numeric_limits<double>::quiet_NaN();
  int max_iterations = 300;
};

/// Smallest eigenpairs of K v = lambda B v, ascending, B-orthonormal.
struct EigenResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;  // N x count
  /// ||K v - lambda B v|| / ||B v|| per pair.
  std::vector<double> residuals;
  EigenMethod method = EigenMethod::Dense;
  int iterations = 0;
};

/// Throws NotPositiveDefinite when B fails Cholesky, InvalidParameter for a
/// bad count, ConvergenceFailure when shift-invert misses `tol`.
EigenResult smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& B, const EigenOptions& opts = {});

/// Convenience overload carrying the deflation flag from boundary conditions.
EigenResult smallest_eigenpairs(const AssembledProblem& p, EigenOptions opts = {});

/// v^T K v / v^T B v. Throws ZeroVector.
double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& B, const Eigen::VectorXd& v);

/// Richardson extrapolation for a second-order method on meshes refined by 2.
struct Extrapolation {
  double extrapolate = 0.0;
  double error_estimate = 0.0;
  /// log2 of successive difference ratios; NaN with fewer than 3 values.
  double observed_order = 0.0;
};

/// Uses the last three values (or two). Throws InvalidParameter for fewer than 2.
Extrapolation richardson(const std::vector<double>& values);

/// log2((a - b) / (b - c)) for values on meshes refined by 2.
double observed_order(double a, double b, double c);

}  // namespace bakry
