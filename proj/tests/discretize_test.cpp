#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

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

Mesh mesh_of(const WeightedManifold& m, std::vector<int> cells) { return build_mesh(m, cells); }

double symmetric_defect(const SparseMatrix& a) {
  return (SparseMatrix(a.transpose()) - a).norm() / std::max(1e-300, a.norm());
}

}  // namespace

TEST_SUITE("discretize") {

TEST_CASE("quadrature weights are positive and sum to the reference volume") {
  for (int order = 1; order <= 8; ++order) {
    for (int dim = 1; dim <= 2; ++dim) {
      const QuadratureRule q = QuadratureRule::for_dim(dim, order);
      double sum = 0.0;
      for (double w : q.weights) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(dim == 1 ? 1.0 : 0.5).epsilon(1e-14));
      CHECK(q.order >= order);
    }
  }
}

TEST_CASE("mesh counts") {
  const Mesh line = mesh_of(ts::interval(0.0, 1.0), {4});
  CHECK(line.vertices.size() == 5);
  CHECK(line.elements.size() == 4);
  CHECK(line.num_dofs == 5);
  const auto bd = line.boundary_dofs();
  REQUIRE(bd.size() == 2);
  CHECK(bd[0] == 0);
  CHECK(bd[1] == 4);
  for (int e = 0; e < 4; ++e) CHECK(line.element_volume(e) > 0.0);

  const WeightedManifold box = ts::manifold({ts::axis(0.0, kPi / 2.0), ts::axis(0.0, 2.0 * kPi, true)}, {"1", "0", "1"}, "0");
  const Mesh m = mesh_of(box, {8, 8});
  CHECK(m.num_dofs == 8 * 9);
  CHECK(m.elements.size() == 128);
  for (std::size_t e = 0; e < m.elements.size(); ++e) CHECK(m.element_volume(static_cast<int>(e)) > 0.0);
  for (const auto& [a, b] : m.periodic_pairs) CHECK(m.dof_of_vertex[a] == m.dof_of_vertex[b]);

  CHECK_THROWS_AS(mesh_of(ts::interval(0.0, 1.0), {1}), ResolutionTooSmall);
}

TEST_CASE("textbook P1 matrices on two elements") {
  const WeightedManifold m = ts::interval(0.0, 1.0);
  const AssembledProblem p = assemble(m, mesh_of(m, {2}));
  const Eigen::MatrixXd K(p.K), B(p.B);
  const double k_ref[3][3] = {{2, -2, 0}, {-2, 4, -2}, {0, -2, 2}};
  const double b_ref[3][3] = {{1.0 / 6, 1.0 / 12, 0}, {1.0 / 12, 1.0 / 3, 1.0 / 12}, {0, 1.0 / 12, 1.0 / 6}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(K(i, j) == doctest::Approx(k_ref[i][j]).epsilon(1e-14));
      CHECK(B(i, j) == doctest::Approx(b_ref[i][j]).epsilon(1e-14));
    }
}

TEST_CASE("a constant weight scales both matrices") {
  const WeightedManifold a = ts::interval(0.0, 1.0, "0");
  const WeightedManifold b = ts::interval(0.0, 1.0, "0.7");
  const Mesh mesh = mesh_of(a, {10});
  const AssembledProblem pa = assemble(a, mesh), pb = assemble(b, mesh);
  CHECK((pb.K - std::exp(-0.7) * pa.K).norm() <= 1e-14 * pa.K.norm());
  CHECK((pb.B - std::exp(-0.7) * pa.B).norm() <= 1e-14 * pa.B.norm());
}

TEST_CASE("adding a constant to h leaves the spectrum unchanged") {
  const WeightedManifold a = ts::polar_disk("x1^2/2");
  const WeightedManifold b = ts::polar_disk("x1^2/2 + 2.3");
  const Mesh mesh = mesh_of(a, {8, 12});
  EigenOptions o;
  o.count = 4;
  const auto ea = smallest_eigenpairs(apply_bc(assemble(a, mesh), BoundaryCondition::Dirichlet, mesh), o);
  const auto eb = smallest_eigenpairs(apply_bc(assemble(b, mesh), BoundaryCondition::Dirichlet, mesh), o);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ea.eigenvalues[i] - eb.eigenvalues[i]) <= 1e-12 * ea.eigenvalues[i]);
}

TEST_CASE("Gaussian interval matrices before boundary conditions") {
  const WeightedManifold m = ts::interval(-2.0, 2.0, "x1^2/2");
  const Mesh mesh = mesh_of(m, {40});
  const AssembledProblem p = assemble(m, mesh);
  for (int i = 0; i < p.size(); ++i) CHECK(p.B.coeff(i, i) > 0.0);
  const Eigen::VectorXd k1 = p.K * Eigen::VectorXd::Ones(p.size());
  CHECK(k1.norm() <= 1e-10 * p.K.norm());
  CHECK(symmetric_defect(p.K) <= 1e-13);
  CHECK(symmetric_defect(p.B) <= 1e-13);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(p.B)};
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek{Eigen::MatrixXd(p.K)};
  CHECK(ek.eigenvalues().minCoeff() >= -1e-12 * p.K.norm());
}

TEST_CASE("boundary conditions") {
  const WeightedManifold m = ts::interval(0.0, 1.0);
  const Mesh mesh = mesh_of(m, {4});
  const AssembledProblem raw = assemble(m, mesh);
  const AssembledProblem d = apply_bc(raw, BoundaryCondition::Dirichlet, mesh);
  CHECK(d.size() == 3);
  CHECK(d.dirichlet_dofs.size() == 2);
  CHECK_FALSE(d.deflate_constant);
  const AssembledProblem n = apply_bc(raw, BoundaryCondition::Neumann, mesh);
  CHECK(n.size() == 5);
  CHECK(n.deflate_constant);

  const Eigen::VectorXd reduced = Eigen::VectorXd::Constant(3, 2.0);
  const Eigen::VectorXd full = expand_to_full(d, mesh, reduced);
  CHECK(full.size() == 5);
  CHECK(full(0) == 0.0);
  CHECK(full(2) == 2.0);
  CHECK(full(4) == 0.0);

  const WeightedManifold s2 = ts::sphere_chart(0.0, kPi, EndKind::Singular, EndKind::Singular);
  const Mesh closed = mesh_of(s2, {8, 8});
  CHECK_THROWS_AS(apply_bc(assemble(s2, closed), BoundaryCondition::Dirichlet, closed), NoBoundary);
}

TEST_CASE("weighted integrals") {
  const WeightedManifold unit = ts::interval(0.0, 1.0);
  CHECK(integrate(mesh_of(unit, {7}), unit, [](const Point&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));

  const WeightedManifold s2 = ts::sphere_chart(0.0, kPi, EndKind::Singular, EndKind::Singular);
  const Mesh sm = mesh_of(s2, {32, 32});
  CHECK(sm.vertices.size() >= 1000);
  CHECK(std::abs(integrate(sm, s2, [](const Point&) { return 1.0; }) - 4.0 * kPi) <= 1e-6);

  const WeightedManifold g = ts::interval(-1.0, 1.0, "x1^2/2");
  const Expr x = parse("x1", 1);
  CHECK(std::abs(integrate(mesh_of(g, {50}), g, std::span<const Expr>(&x, 1))) <= 1e-12);

  const double gauss = integrate(mesh_of(g, {50}), g, [](const Point&) { return 1.0; }, 8);
  CHECK(gauss == doctest::Approx(std::sqrt(2.0 * kPi) * std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-10));

  const WeightedManifold line = ts::interval(-2.0, 2.0, "x1^2/2");
  CHECK(integrate_boundary(mesh_of(line, {4}), line, Face{0, 1}, [](const Point&) { return 1.0; }) ==
        doctest::Approx(std::exp(-2.0)));
  const WeightedManifold disk = ts::polar_disk("0");
  CHECK(integrate_boundary(mesh_of(disk, {4, 16}), disk, Face{0, 1}, [](const Point&) { return 1.0; }) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("Fourier modes of the hemisphere reduction") {
  const WeightedManifold cap = ts::sphere_chart(0.0, kPi / 2.0, EndKind::Singular, EndKind::Boundary);
  const Mesh mesh = build_axisymmetric_mesh(cap, 400);
  CHECK(mesh.axisymmetric);
  EigenOptions o;
  AssemblyOptions a0, a1;
  a1.fourier_mode = 1;
  const auto e0 = smallest_eigenpairs(apply_bc(assemble(cap, mesh, a0), BoundaryCondition::Dirichlet, mesh), o);
  const auto e1 = smallest_eigenpairs(apply_bc(assemble(cap, mesh, a1), BoundaryCondition::Dirichlet, mesh), o);
  // cos(theta) and sin(theta)cos(theta)cos(phi): eigenvalues 2 and 6.
  CHECK(e0.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(e1.eigenvalues[0] == doctest::Approx(6.0).epsilon(1e-4));

  const WeightedManifold skew = ts::manifold({ts::axis(0.1, 1.0), ts::axis(0.0, 2.0 * kPi, true)}, {"1", "0", "x1^2"},
                                             "sin(x2)");
  CHECK_THROWS_AS(build_axisymmetric_mesh(skew, 10), NotAxisymmetric);
}

TEST_CASE("Galerkin eigenvalues decrease under refinement towards the oracle") {
  const double oracle = ts::gaussian_disk_dirichlet_oracle();
  MeshSpec spec;
  spec.cells = {25};
  spec.levels = 3;
  spec.axisymmetric = true;
  const SpectralResult r = first_eigenvalue(ts::polar_disk("x1^2/2"), spec, BoundaryCondition::Dirichlet);
  for (std::size_t i = 1; i < r.levels.size(); ++i) CHECK(r.levels[i].lambda1 <= r.levels[i - 1].lambda1);
  for (const auto& l : r.levels) CHECK(l.lambda1 >= oracle - 1e-8);
}

TEST_CASE("Rayleigh quotients bound the first eigenvalue") {
  const WeightedManifold m = ts::polar_disk("x1^2/2");
  const Mesh mesh = mesh_of(m, {8, 16});
  const AssembledProblem p = apply_bc(assemble(m, mesh), BoundaryCondition::Dirichlet, mesh);
  const double l1 = smallest_eigenpairs(p).eigenvalues[0];
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(p.size());
    for (int i = 0; i < p.size(); ++i) v(i) = d(rng);
    CHECK(rayleigh_quotient(p.K, p.B, v) >= l1 - 1e-10);
  }
}

TEST_CASE("matrix dump format") {
  const WeightedManifold m = ts::interval(0.0, 1.0);
  const AssembledProblem p = assemble(m, mesh_of(m, {3}));
  std::ostringstream os;
  write_matrix(os, p.K);
  std::istringstream is(os.str());
  int n = 0, nnz = 0;
  is >> n >> nnz;
  CHECK(n == 4);
  CHECK(nnz == 7);
  int pi = -1, pj = -1;
  for (int e = 0; e < nnz; ++e) {
    int i = 0, j = 0;
    double v = 0.0;
    is >> i >> j >> v;
    CHECK(i <= j);
    CHECK((i > pi || (i == pi && j > pj)));
    pi = i;
    pj = j;
  }
}

}
