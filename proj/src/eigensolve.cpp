#include "bakry/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "bakry/errors.hpp"

namespace bakry {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> residual_norms(const SparseMatrix& K, const SparseMatrix& B, const std::vector<double>& lambda,
                                   const MatrixXd& V) {
  std::vector<double> out(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const VectorXd bv = B * V.col(j);
    const VectorXd r = K * V.col(j) - lambda[j] * bv;
    out[j] = r.norm() / bv.norm();
  }
  return out;
}

// Fix the sign of each eigenvector so that its largest entry is positive.
void normalize_signs(MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index imax = 0;
    V.col(j).cwiseAbs().maxCoeff(&imax);
    if (V(imax, j) < 0.0) V.col(j) *= -1.0;
  }
}

// Eigenvectors for eigenvalues already known from the dense solve: inverse
// iteration shifted just below each cluster, then one Rayleigh-Ritz pass.
MatrixXd vectors_for(const SparseMatrix& K, const SparseMatrix& B, const VectorXd& lambda, bool deflate_constant) {
  const Eigen::Index n = K.rows();
  const auto k = lambda.size();
  const VectorXd ones = VectorXd::Ones(n);
  const VectorXd b_ones = B * ones;
  const double ones_norm = ones.dot(b_ones);
  auto project = [&](MatrixXd& X) {
    if (!deflate_constant) return;
    for (Eigen::Index j = 0; j < X.cols(); ++j) X.col(j) -= (b_ones.dot(X.col(j)) / ones_norm) * ones;
  };

  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatrixXd X(n, k);
  Eigen::SimplicialLDLT<SparseMatrix> solver;
  for (Eigen::Index first = 0; first < k;) {
    const double scale = std::max(1.0, std::abs(lambda(first)));
    Eigen::Index last = first + 1;
    while (last < k && lambda(last) - lambda(first) <= 1e-8 * scale) ++last;
    const double sigma = lambda(first) - 1e-7 * scale;
    solver.compute(SparseMatrix(K - sigma * B));
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("shifted factorization failed", NAN);
    MatrixXd Y(n, last - first);
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      for (Eigen::Index i = 0; i < n; ++i) Y(i, j) = dist(rng);
    for (int it = 0; it < 4; ++it) {
      project(Y);
      Y = solver.solve(B * Y);
      const Eigen::HouseholderQR<MatrixXd> qr(Y);
      Y = qr.householderQ() * MatrixXd::Identity(n, Y.cols());
    }
    project(Y);
    X.middleCols(first, Y.cols()) = Y;
    first = last;
  }

  MatrixXd Kr = X.transpose() * (K * X);
  MatrixXd Br = X.transpose() * (B * X);
  Kr = 0.5 * (Kr + Kr.transpose()).eval();
  Br = 0.5 * (Br + Br.transpose()).eval();
  const Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Kr, Br);
  if (ges.info() != Eigen::Success) throw ConvergenceFailure("Rayleigh-Ritz step failed", NAN);
  return X * ges.eigenvectors();
}

EigenResult dense_path(const SparseMatrix& K, const SparseMatrix& B, const EigenOptions& opts) {
  const Eigen::Index n = K.rows();
  const MatrixXd Kd(K);
  const Eigen::LLT<MatrixXd> llt{MatrixXd(B)};
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("mass matrix is not positive definite");

  // Congruence C = L^{-1} K L^{-T}.
  MatrixXd C = llt.matrixL().solve(Kd);
  C = llt.matrixL().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();

  // Deflation: reflect L^T 1 onto e_1 with a Householder reflector applied in
  // place, then drop the first row and column.
  VectorXd v;
  if (opts.deflate_constant) {
    v = llt.matrixU() * VectorXd::Ones(n);
    v(0) += (v(0) >= 0.0 ? 1.0 : -1.0) * v.norm();
    const double beta = 2.0 / v.squaredNorm();
    const VectorXd cv = C * v;
    const VectorXd p = beta * cv - (0.5 * beta * beta * v.dot(cv)) * v;
    C.noalias() -= v * p.transpose();
    C.noalias() -= p * v.transpose();
    C = C.bottomRightCorner(n - 1, n - 1).eval();
  }
  const int k = opts.count;
  // Full eigenvectors cost several times the eigenvalues; only ask for them
  // when most of the spectrum is wanted.
  const bool full = 4 * k > C.rows();
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(C, full ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("dense symmetric eigensolver failed", NAN);

  EigenResult r;
  r.method = EigenMethod::Dense;
  for (int j = 0; j < k; ++j) r.eigenvalues.push_back(es.eigenvalues()(j));
  if (full) {
    MatrixXd Y = MatrixXd::Zero(n, k);
    if (opts.deflate_constant) {
      Y.bottomRows(n - 1) = es.eigenvectors().leftCols(k);
      Y -= (2.0 / v.squaredNorm()) * v * (v.transpose() * Y);
    } else {
      Y = es.eigenvectors().leftCols(k);
    }
    r.eigenvectors = llt.matrixU().solve(Y);
  } else {
    r.eigenvectors = vectors_for(K, B, es.eigenvalues().head(k), opts.deflate_constant);
  }
  normalize_signs(r.eigenvectors);
  r.residuals = residual_norms(K, B, r.eigenvalues, r.eigenvectors);
  return r;
}

EigenResult shift_invert_path(const SparseMatrix& K, const SparseMatrix& B, const EigenOptions& opts) {
  const Eigen::Index n = K.rows();
  {
    const Eigen::SimplicialLLT<SparseMatrix> chol(B);
    if (chol.info() != Eigen::Success) throw NotPositiveDefinite("mass matrix is not positive definite");
  }

  // Pick a shift below the spectrum: K - sigma B must factor with positive pivots.
  const bool automatic = std::isnan(opts.shift);
  double sigma = automatic ? -1.0 : opts.shift;
  Eigen::SimplicialLDLT<SparseMatrix> solver;
  for (int attempt = 0;; ++attempt) {
    const SparseMatrix A = K - sigma * B;
    solver.compute(A);
    const bool ok = solver.info() == Eigen::Success && (solver.vectorD().array() > 0.0).all();
    if (ok) break;
    if (!automatic) throw InvalidParameter("shift-invert shift lies above the smallest eigenvalue");
    if (attempt > 60) throw ConvergenceFailure("could not find a shift below the spectrum", NAN);
    sigma = 4.0 * sigma;
  }

  const VectorXd ones = VectorXd::Ones(n);
  const VectorXd b_ones = B * ones;
  const double ones_norm = ones.dot(b_ones);
  auto deflate = [&](MatrixXd& X) {
    if (!opts.deflate_constant) return;
    for (Eigen::Index j = 0; j < X.cols(); ++j) X.col(j) -= (b_ones.dot(X.col(j)) / ones_norm) * ones;
  };

  const Eigen::Index limit = opts.deflate_constant ? n - 1 : n;
  const Eigen::Index p = std::min<Eigen::Index>(limit, std::max(2 * opts.count, opts.count + 8));
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatrixXd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = dist(rng);
  deflate(X);

  EigenResult r;
  r.method = EigenMethod::ShiftInvert;
  double worst = INFINITY;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    MatrixXd Y = solver.solve(B * X);
    deflate(Y);
    const Eigen::HouseholderQR<MatrixXd> qr(Y);
    const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, p);
    MatrixXd Kr = Q.transpose() * (K * Q);
    MatrixXd Br = Q.transpose() * (B * Q);
    Kr = 0.5 * (Kr + Kr.transpose()).eval();
    Br = 0.5 * (Br + Br.transpose()).eval();
    const Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Kr, Br);
    if (ges.info() != Eigen::Success) throw ConvergenceFailure("Rayleigh-Ritz step failed", worst);
    X = Q * ges.eigenvectors();

    std::vector<double> lambda(opts.count);
    for (int j = 0; j < opts.count; ++j) lambda[j] = ges.eigenvalues()(j);
    const MatrixXd V = X.leftCols(opts.count);
    const std::vector<double> res = residual_norms(K, B, lambda, V);
    worst = *std::max_element(res.begin(), res.end());
    if (worst <= opts.tol) {
      r.eigenvalues = lambda;
      r.eigenvectors = V;
      normalize_signs(r.eigenvectors);
      r.residuals = res;
      r.iterations = it;
      return r;
    }
    // Move an automatic shift up towards the Ritz values, keeping it below
    // the spectrum (all pivots positive), so convergence is governed by the
    // gap between the wanted and the remaining eigenvalues.
    if (automatic && it % 3 == 0) {
      const double lo = ges.eigenvalues()(0);
      const double spread = std::max(ges.eigenvalues()(opts.count - 1) - lo, 1e-6 * std::max(1.0, std::abs(lo)));
      double target = lo - 0.25 * spread;
      for (int attempt = 0; attempt < 4 && target > sigma; ++attempt) {
        Eigen::SimplicialLDLT<SparseMatrix> trial(SparseMatrix(K - target * B));
        if (trial.info() == Eigen::Success && (trial.vectorD().array() > 0.0).all()) {
          solver.compute(SparseMatrix(K - target * B));
          sigma = target;
          break;
        }
        target = 0.5 * (target + sigma);
      }
    }
  }
  throw ConvergenceFailure("shift-invert subspace iteration did not converge", worst);
}

}  // namespace

std::string to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::Auto: return "auto";
    case EigenMethod::Dense: return "dense";
    case EigenMethod::ShiftInvert: return "shift-invert";
  }
  return "auto";
}

EigenResult smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& B, const EigenOptions& opts) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n || B.rows() != n || B.cols() != n) throw DimensionMismatch("K and B must be square and of equal size");
  const Eigen::Index available = opts.deflate_constant ? n - 1 : n;
  if (opts.count < 1 || opts.count > available) throw InvalidParameter("eigenpair count must lie in [1, N]");
  EigenMethod method = opts.method;
  if (method == EigenMethod::Auto) method = n <= opts.dense_limit ? EigenMethod::Dense : EigenMethod::ShiftInvert;
  if (method == EigenMethod::ShiftInvert && 2 * opts.count + 2 > available) method = EigenMethod::Dense;
  return method == EigenMethod::Dense ? dense_path(K, B, opts) : shift_invert_path(K, B, opts);
}

EigenResult smallest_eigenpairs(const AssembledProblem& p, EigenOptions opts) {
  opts.deflate_constant = p.deflate_constant;
  return smallest_eigenpairs(p.K, p.B, opts);
}

double rayleigh_quotient(const SparseMatrix& K, const SparseMatrix& B, const Eigen::VectorXd& v) {
  if (v.size() != K.rows()) throw DimensionMismatch("vector length differs from matrix size");
  const double den = v.dot(B * v);
  if (v.isZero(0.0) || !(den > 0.0)) throw ZeroVector("Rayleigh quotient of a zero vector");
  return v.dot(K * v) / den;
}

double observed_order(double a, double b, double c) {
  const double num = a - b;
  const double den = b - c;
  if (den == 0.0 || num / den <= 0.0) return NAN;
  return std::log2(num / den);
}

Extrapolation richardson(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidParameter("Richardson extrapolation needs at least two levels");
  Extrapolation e;
  const double b = values[n - 2], c = values[n - 1];
  const double r2 = c + (c - b) / 3.0;
  e.extrapolate = r2;
  if (n == 2) {
    e.error_estimate = std::abs(c - b) / 3.0;
    e.observed_order = NAN;
    return e;
  }
  const double a = values[n - 3];
  const double r1 = b + (b - a) / 3.0;
  e.error_estimate = std::abs(r2 - r1);
  e.observed_order = observed_order(a, b, c);
  return e;
}

}  // namespace bakry
