#include <cmath>
#include <random>

#include "bakry/discretize.hpp"
#include "bakry/eigensolve.hpp"
#include "bakry/errors.hpp"
#include "bakry/verify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bakry;
namespace ts = testing_support;
using ts::kPi;

namespace {

SparseMatrix from_dense(const Eigen::MatrixXd& a) { return a.sparseView(); }

/// Weighted graph Laplacian of a ring with random chords, plus a random
/// non-negative diagonal; and a diagonally dominant mass-like matrix.
std::pair<SparseMatrix, SparseMatrix> random_pair(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::vector<Eigen::Triplet<double>> kt, bt;
  auto edge = [&](int i, int j, double v) {
    kt.emplace_back(i, i, v);
    kt.emplace_back(j, j, v);
    kt.emplace_back(i, j, -v);
    kt.emplace_back(j, i, -v);
  };
  for (int i = 0; i < n; ++i) edge(i, (i + 1) % n, w(rng));
  for (int c = 0; c < n / 3; ++c) {
    const int i = node(rng), j = node(rng);
    if (i != j) edge(i, j, w(rng));
  }
  for (int i = 0; i < n; ++i) {
    kt.emplace_back(i, i, 0.01 * w(rng));
    bt.emplace_back(i, i, 1.0 + w(rng));
    const double off = 0.2 * w(rng);
    bt.emplace_back(i, (i + 1) % n, off);
    bt.emplace_back((i + 1) % n, i, off);
  }
  SparseMatrix K(n, n), B(n, n);
  K.setFromTriplets(kt.begin(), kt.end());
  B.setFromTriplets(bt.begin(), bt.end());
  return {K, B};
}

}  // namespace

TEST_SUITE("eigensolve") {

TEST_CASE("diagonal problem") {
  Eigen::MatrixXd K(2, 2), B = Eigen::MatrixXd::Identity(2, 2);
  K << 2, 0, 0, 1;
  const EigenResult r = smallest_eigenpairs(from_dense(K), from_dense(B));
  REQUIRE(r.eigenvalues.size() == 1);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(std::abs(r.eigenvectors(0, 0)) < 1e-14);
  CHECK(r.eigenvectors(1, 0) == doctest::Approx(1.0));
  CHECK(r.method == EigenMethod::Dense);
}

TEST_CASE("flat interval converges to pi^2") {
  MeshSpec spec;
  spec.cells = {500};
  spec.levels = 3;
  const SpectralResult r = first_eigenvalue(ts::interval(0.0, 1.0), spec, BoundaryCondition::Dirichlet);
  CHECK(r.levels.back().dofs == 1999);
  CHECK(r.levels.back().method == EigenMethod::Dense);
  CHECK(std::abs(r.extrapolate - kPi * kPi) <= 1e-6 * kPi * kPi);
  CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Ornstein-Uhlenbeck interval against the shooting oracle") {
  const double oracle = ts::ou_interval_dirichlet_oracle(4.0);
  CHECK(oracle == doctest::Approx(9.9308e-4).epsilon(1e-4));
  MeshSpec spec;
  spec.cells = {400};
  spec.levels = 3;
  const SpectralResult r = first_eigenvalue(ts::interval(-4.0, 4.0, "x1^2/2"), spec, BoundaryCondition::Dirichlet);
  CHECK(std::abs(r.extrapolate - oracle) <= 1e-5 * oracle);
}

TEST_CASE("eigenpair invariants") {
  const auto [K, B] = random_pair(120, 77);
  EigenOptions o;
  o.count = 6;
  const EigenResult r = smallest_eigenpairs(K, B, o);
  for (int i = 1; i < 6; ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  const Eigen::MatrixXd G = r.eigenvectors.transpose() * (B * r.eigenvectors);
  CHECK((G - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-8);
  for (double res : r.residuals) CHECK(res <= o.tol);
}

TEST_CASE("dense and shift-invert agree") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [K, B] = random_pair(300, seed);
    EigenOptions dense, iter;
    dense.count = iter.count = 5;
    dense.method = EigenMethod::Dense;
    iter.method = EigenMethod::ShiftInvert;
    iter.tol = 1e-10;
    const EigenResult a = smallest_eigenpairs(K, B, dense);
    const EigenResult b = smallest_eigenpairs(K, B, iter);
    CHECK(a.method == EigenMethod::Dense);
    CHECK(b.method == EigenMethod::ShiftInvert);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-8 * std::abs(a.eigenvalues[i]));
  }
}

TEST_CASE("deflated Neumann path agrees across methods") {
  const WeightedManifold m = ts::interval(-1.0, 1.0, "x1^2/2");
  const Mesh mesh = build_mesh(m, std::vector<int>{200});
  const AssembledProblem p = apply_bc(assemble(m, mesh), BoundaryCondition::Neumann, mesh);
  EigenOptions dense, iter;
  dense.count = iter.count = 3;
  dense.method = EigenMethod::Dense;
  iter.method = EigenMethod::ShiftInvert;
  iter.tol = 1e-10;
  const EigenResult a = smallest_eigenpairs(p, dense);
  const EigenResult b = smallest_eigenpairs(p, iter);
  CHECK(a.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-3));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-8 * a.eigenvalues[i]);
  const Eigen::VectorXd b1 = p.B * Eigen::VectorXd::Ones(p.size());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(b1.dot(a.eigenvectors.col(i))) <= 1e-10);
}

TEST_CASE("shifting K by B shifts the spectrum") {
  const auto [K, B] = random_pair(200, 9);
  EigenOptions o;
  o.count = 4;
  const EigenResult a = smallest_eigenpairs(K, B, o);
  const EigenResult b = smallest_eigenpairs(SparseMatrix(K + B), B, o);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(b.eigenvalues[i] - a.eigenvalues[i] - 1.0) <= 1e-10);
}

TEST_CASE("Rayleigh quotient") {
  const WeightedManifold m = ts::interval(0.0, 1.0);
  const Mesh mesh = build_mesh(m, std::vector<int>{2});
  const AssembledProblem p = apply_bc(assemble(m, mesh), BoundaryCondition::Dirichlet, mesh);
  REQUIRE(p.size() == 1);
  const Eigen::VectorXd hat = Eigen::VectorXd::Ones(1);
  CHECK(rayleigh_quotient(p.K, p.B, hat) == doctest::Approx(12.0));
  CHECK(rayleigh_quotient(p.K, p.B, hat) >= kPi * kPi);

  const auto [K, B] = random_pair(80, 3);
  const EigenResult r = smallest_eigenpairs(K, B);
  CHECK(std::abs(rayleigh_quotient(K, B, r.eigenvectors.col(0)) - r.eigenvalues[0]) <= 1e-12 * r.eigenvalues[0]);
  CHECK_THROWS_AS(rayleigh_quotient(K, B, Eigen::VectorXd::Zero(80)), ZeroVector);
}

TEST_CASE("error paths") {
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(3, 3), B = Eigen::MatrixXd::Identity(3, 3);
  B(2, 2) = -1.0;
  CHECK_THROWS_AS(smallest_eigenpairs(from_dense(K), from_dense(B)), NotPositiveDefinite);
  EigenOptions o;
  o.count = 4;
  CHECK_THROWS_AS(smallest_eigenpairs(from_dense(K), from_dense(Eigen::MatrixXd::Identity(3, 3)), o), InvalidParameter);
  o.count = 0;
  CHECK_THROWS_AS(smallest_eigenpairs(from_dense(K), from_dense(Eigen::MatrixXd::Identity(3, 3)), o), InvalidParameter);
  o.count = 1;
  o.method = EigenMethod::ShiftInvert;
  o.max_iterations = 1;
  o.tol = 1e-300;
  const auto [Kr, Br] = random_pair(300, 12);
  CHECK_THROWS_AS(smallest_eigenpairs(Kr, Br, o), ConvergenceFailure);
}

TEST_CASE("Richardson extrapolation") {
  // values lambda + C h^2 with h halving: the extrapolate is exact.
  const std::vector<double> v{5.0 + 1.0, 5.0 + 0.25, 5.0 + 0.0625};
  const Extrapolation e = richardson(v);
  CHECK(e.extrapolate == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(e.observed_order == doctest::Approx(2.0));
  CHECK(e.error_estimate <= 1e-14);
  CHECK(std::isnan(observed_order(1.0, 2.0, 1.5)));
  CHECK(observed_order(1.0, 2.0, 3.0) == 0.0);
  CHECK_THROWS_AS(richardson({1.0}), InvalidParameter);
}

}
