#include <cmath>
#include <random>

#include "bakry/discretize.hpp"
#include "bakry/errors.hpp"
#include "bakry/hypersurface.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bakry;
namespace ts = testing_support;
using ts::kPi;

namespace {

std::vector<double> sphere_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(0.3, kPi - 0.3), p(0.0, 2.0 * kPi);
  return {t(rng), p(rng)};
}

SamplePlan plan_of(std::vector<int> counts) {
  SamplePlan plan;
  plan.counts = std::move(counts);
  return plan;
}

const HypothesisCheck& find(const Thm2Report& r, const std::string& name) {
  for (const auto& h : r.hypotheses)
    if (h.name == name) return h;
  FAIL("missing hypothesis " << name);
  return r.hypotheses.front();
}

}  // namespace

TEST_SUITE("hypersurface") {

TEST_CASE("shrinker sphere shape data") {
  const Immersion imm = ts::shrinker_sphere();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto p = sphere_point(rng);
    const ShapePointData s = shape_at(imm, p);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(std::abs(s.a[a][b] - s.g[a][b] / std::sqrt(2.0)) <= 1e-12);
    CHECK(s.mean_curvature == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(s.normal_derivative == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(std::abs(s.weighted_mean_curvature) <= 1e-12);
    CHECK(s.norm2_A == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.ambient_ric_h_nu_nu == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.a[0][1] == doctest::Approx(s.a[1][0]));
  }
}

TEST_CASE("plane and cylinder shape data") {
  const double p[] = {0.6, 1.1};
  const ShapePointData plane = shape_at(ts::plane_disk(), p);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(std::abs(plane.a[a][b]) < 1e-15);
  CHECK(std::abs(plane.mean_curvature) < 1e-15);
  CHECK(std::abs(plane.normal_derivative) < 1e-15);
  CHECK(std::abs(plane.weighted_mean_curvature) < 1e-15);

  const ShapePointData cyl = shape_at(ts::cylinder(2.0), p);
  CHECK(cyl.mean_curvature == doctest::Approx(1.0));
  CHECK(cyl.norm2_A == doctest::Approx(1.0));
  // g = identity on this chart, so a is the shape operator: principal curvatures 0 (along x1) and 1.
  CHECK(std::abs(cyl.a[0][0]) < 1e-14);
  CHECK(std::abs(cyl.a[0][1]) < 1e-14);
  CHECK(cyl.a[1][1] == doctest::Approx(1.0));
  CHECK(cyl.normal[0] == doctest::Approx(std::cos(1.1)));
}

TEST_CASE("h-minimality residuals") {
  const SamplePlan plan = plan_of({16, 16});
  CHECK(h_minimality_residual(ts::shrinker_sphere(), plan).max <= 1e-10);
  CHECK(h_minimality_residual(ts::sphere("1", "(x1^2 + x2^2 + x3^2)/2"), plan).max == doctest::Approx(1.0));
  CHECK(h_minimality_residual(ts::plane_disk(), plan).max <= 1e-15);
  CHECK(h_minimality_residual(ts::cylinder(2.0), plan).max == doctest::Approx(1.0));
}

TEST_CASE("orientation flip") {
  const Immersion imm = ts::immersion(
      Domain{{ts::axis(-1.0, 1.0), ts::axis(-1.0, 1.0)}}, {"x1", "x2", "0.3*x1^2 - 0.2*x1*x2 + 0.5*x2^3"},
      "0.5*x1^2 + x3 + 0.2*x2*x3");
  const Immersion flip = imm.flipped();
  const SamplePlan plan = plan_of({8, 8});
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto p = ts::random_point(rng, 2, -0.9, 0.9);
    const ShapePointData a = shape_at(imm, p), b = shape_at(flip, p);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(b.a[r][c] == doctest::Approx(-a.a[r][c]).epsilon(1e-14).scale(1e-14));
    CHECK(b.mean_curvature == doctest::Approx(-a.mean_curvature).epsilon(1e-14).scale(1e-14));
    CHECK(b.normal_derivative == doctest::Approx(-a.normal_derivative).epsilon(1e-14).scale(1e-14));
    CHECK(b.weighted_mean_curvature == doctest::Approx(-a.weighted_mean_curvature).epsilon(1e-14).scale(1e-14));
    CHECK(b.norm2_A == doctest::Approx(a.norm2_A).epsilon(1e-14).scale(1e-14));
  }
  CHECK(h_minimality_residual(flip, plan).max == doctest::Approx(h_minimality_residual(imm, plan).max));
}

TEST_CASE("pullback metric matches the shape data; Gauss equation on the sphere") {
  const Immersion imm = ts::sphere("sqrt(2)", "x3");
  const WeightedManifold m = induced_manifold(imm);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto p = sphere_point(rng);
    const ShapePointData s = shape_at(imm, p);
    double g[2][2];
    m.fields().metric_values(p, g);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(std::abs(g[a][b] - s.g[a][b]) <= 1e-10);
    const CurvatureData c = curvature_at(m, p);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(std::abs(c.ricci[a][b] - 0.5 * s.g[a][b]) <= 1e-8);
  }
}

TEST_CASE("splitting of the ambient Laplacian") {
  const Immersion unit = ts::sphere("1", "0");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = sphere_point(rng);
    const SplittingResidual r = splitting_residual(unit, parse("x3", 3), p);
    CHECK(std::abs(r.ambient_laplacian) < 1e-14);
    CHECK(r.intrinsic_laplacian == doctest::Approx(-2.0 * std::cos(p[0])));
    CHECK(r.plain <= 1e-9);
  }
  for (const Immersion& imm : {ts::shrinker_sphere(), ts::cylinder(2.0), ts::plane_disk()}) {
    const double p[] = {0.7, 2.0};
    const SplittingResidual one = splitting_residual(imm, parse("1", 3), p);
    CHECK(one.plain == 0.0);
    CHECK(one.drift == 0.0);
  }
  const Immersion shr = ts::shrinker_sphere();
  for (int i = 0; i < 20; ++i) {
    const auto p = sphere_point(rng);
    CHECK(splitting_residual(shr, parse("(x1^2 + x2^2 + x3^2)/2", 3), p).drift <= 1e-8);
  }
}

TEST_CASE("mean curvature identity") {
  const Immersion shr = ts::shrinker_sphere();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto p = sphere_point(rng);
    const IdentityResidual one = mean_curvature_identity(shr, parse("1", 2), p);
    CHECK(one.lhs == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(one.rhs == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(one.residual <= 1e-9);
    CHECK(mean_curvature_identity(shr, parse("x1^3*x2 - 2*x1*x2^2 + x2", 2), p).residual <= 1e-8);
  }
  const double p[] = {0.4, 1.0};
  const IdentityResidual plane = mean_curvature_identity(ts::plane_disk(), parse("x1^2 + sin(x2)", 2), p);
  CHECK(plane.lhs == 0.0);
  CHECK(plane.rhs == 0.0);
  CHECK(plane.residual == 0.0);
}

TEST_CASE("convention survey") {
  const auto survey = convention_survey(ts::shrinker_sphere(), parse("cos(x1)", 2), plan_of({8, 8}));
  REQUIRE(survey.size() == 4);
  for (const auto& e : survey) {
    if (e.shape_sign == 1 && e.weight_sign == 1) {
      CHECK(e.h_minimality <= 1e-10);
      CHECK(e.identity <= 1e-8);
    }
    if (e.shape_sign == -1 && e.weight_sign == 1) CHECK(e.h_minimality == doctest::Approx(2.0 * std::sqrt(2.0)));
  }
}

TEST_CASE("stability form by matrices and by quadrature") {
  const Immersion imm = ts::shrinker_sphere();
  const WeightedManifold m = induced_manifold(imm);
  const Mesh mesh = build_mesh(m, std::vector<int>{10, 12});
  const StabilityProblem sp = build_stability_problem(imm, mesh);
  CHECK((SparseMatrix(sp.potential.transpose()) - sp.potential).norm() <= 1e-13 * sp.potential.norm());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd v(mesh.num_dofs);
    for (int i = 0; i < mesh.num_dofs; ++i) v(i) = d(rng);
    const double a = stability_form_matrix(sp, v), b = stability_form_direct(imm, sp, v);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(a), 1.0));
  }
}

TEST_CASE("stability verdicts") {
  StabilityOptions o;
  o.max_fourier_mode = 2;

  const Immersion shr = ts::shrinker_sphere();
  const StabilityResult s = stability_verdict(shr, build_axisymmetric_mesh(induced_manifold(shr), 200), o);
  CHECK(s.mu1 == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK_FALSE(s.stable);
  CHECK(s.closed);
  CHECK(s.q_one_matrix < 0.0);
  CHECK(s.q_one_direct == doctest::Approx(s.q_one_matrix).epsilon(1e-9));

  const Immersion plane = ts::plane_disk();
  const double oracle = ts::gaussian_disk_dirichlet_oracle() - 1.0;
  const StabilityResult p = stability_verdict(plane, build_axisymmetric_mesh(induced_manifold(plane), 400), o);
  CHECK(p.mu1 == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(p.stable);

  const Immersion cyl = ts::cylinder(2.0);
  const StabilityResult c = stability_verdict(cyl, build_axisymmetric_mesh(induced_manifold(cyl), 400), o);
  CHECK(c.mu1 == doctest::Approx(kPi * kPi / 4.0 - 1.0).epsilon(1e-4));
  CHECK(c.stable);
}

TEST_CASE("hypothesis checker for the stability theorem") {
  const SamplePlan plan = plan_of({12, 12});
  const Thm2Report shr = thm2_check(ts::shrinker_sphere(), 0.5, plan, 1e-9);
  CHECK_FALSE(shr.all_pass);
  CHECK(find(shr, "h_minimal").pass);
  CHECK(find(shr, "parallel_hessian").pass);
  CHECK(find(shr, "mean_curvature_nonzero").pass);
  const HypothesisCheck& cond = find(shr, "curvature_condition");
  CHECK_FALSE(cond.pass);
  CHECK(cond.margin < 0.0);

  const Thm2Report plane = thm2_check(ts::plane_disk(), 0.5, plan, 1e-9);
  CHECK_FALSE(plane.all_pass);
  CHECK_FALSE(find(plane, "mean_curvature_nonzero").pass);

  const Thm2Report cubic = thm2_check(ts::sphere("sqrt(2)", "(x1^2 + x2^2 + x3^2)/2 + x3^3"), 0.5, plan, 1e-9);
  CHECK_FALSE(cubic.all_pass);
  const HypothesisCheck& par = find(cubic, "parallel_hessian");
  CHECK_FALSE(par.pass);
  CHECK(par.margin < 0.0);

  CHECK_THROWS_AS(thm2_check(ts::shrinker_sphere(), 0.0, plan, 1e-9), InvalidParameter);
}

TEST_CASE("rank-deficient maps are rejected") {
  const Immersion bad = ts::immersion(Domain{{ts::axis(0.0, 1.0), ts::axis(0.0, 1.0)}}, {"x1", "x1", "x1"}, "0");
  const double p[] = {0.5, 0.5};
  CHECK_THROWS_AS(shape_at(bad, p), RankDeficient);
}

}
