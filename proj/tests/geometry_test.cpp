#include <cmath>

#include "bakry/errors.hpp"
#include "bakry/geometry.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bakry;
namespace ts = testing_support;
using ts::kPi;

namespace {

WeightedManifold unit_sphere() { return ts::sphere_chart(0.0, kPi, EndKind::Singular, EndKind::Singular); }

SamplePlan grid(std::vector<int> counts) {
  SamplePlan plan;
  plan.counts = std::move(counts);
  return plan;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("round sphere Christoffel symbols and Ricci") {
  const WeightedManifold s2 = unit_sphere();
  const double p[] = {kPi / 4.0, 0.3};
  const CurvatureData c = curvature_at(s2, p);
  CHECK(c.christoffel[0][1][1] == doctest::Approx(-0.5));
  CHECK(c.christoffel[1][0][1] == doctest::Approx(1.0));
  CHECK(c.christoffel[1][1][0] == doctest::Approx(1.0));

  const double q[] = {kPi / 3.0, 1.0};
  const CurvatureData d = curvature_at(s2, q);
  CHECK(d.ricci[0][0] == doctest::Approx(1.0));
  CHECK(d.ricci[1][1] == doctest::Approx(0.75));
  CHECK(std::abs(d.ricci[0][1]) < 1e-14);
  CHECK(d.lambda_min_ric_h == doctest::Approx(1.0));
}

TEST_CASE("Gaussian plane has Ric_h equal to the identity") {
  const WeightedManifold m = ts::flat_plane("(x1^2 + x2^2)/2");
  const double p[] = {0.3, -0.7};
  const CurvatureData c = curvature_at(m, p);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(c.ricci[i][j]) < 1e-15);
      CHECK(c.hess_h[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
      CHECK(c.ric_h[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  CHECK(c.grad_h_norm2 == doctest::Approx(0.09 + 0.49));
}

TEST_CASE("Ric_h of a quadratic weight is the symmetric part of its matrix") {
  const WeightedManifold m = ts::flat_plane("1.5*x1^2 + 0.8*x1*x2 - 0.6*x2^2 + x1 - 3");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = ts::random_point(rng, 2, -1.0, 1.0);
    const CurvatureData c = curvature_at(m, p);
    CHECK(std::abs(c.ric_h[0][0] - 3.0) <= 1e-12);
    CHECK(std::abs(c.ric_h[0][1] - 0.8) <= 1e-12);
    CHECK(std::abs(c.ric_h[1][0] - 0.8) <= 1e-12);
    CHECK(std::abs(c.ric_h[1][1] + 1.2) <= 1e-12);
  }
}

TEST_CASE("symmetry of Christoffel symbols and Ricci; sphere Ricci equals g") {
  const WeightedManifold s2 = unit_sphere();
  const WeightedManifold warped = ts::manifold({ts::axis(0.5, 1.5), ts::axis(0.0, 1.0)},
                                               {"1 + x2^2", "0.3*x1*x2", "exp(x1)"}, "x1*x2");
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto p = ts::random_point(rng, 2, 0.2, 2.9);
    const CurvatureData c = curvature_at(s2, p);
    const double g[2][2] = {{1.0, 0.0}, {0.0, std::sin(p[0]) * std::sin(p[0])}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(std::abs(c.ricci[a][b] - g[a][b]) <= 1e-9);

    const auto q = ts::random_point(rng, 2, 0.5, 1.0);
    const CurvatureData w = curvature_at(warped, q);
    for (int k = 0; k < 2; ++k) CHECK(w.christoffel[k][0][1] == w.christoffel[k][1][0]);
    CHECK(w.ricci[0][1] == doctest::Approx(w.ricci[1][0]).epsilon(1e-13));
    CHECK(w.ric_h[0][1] == doctest::Approx(w.ric_h[1][0]).epsilon(1e-13));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(w.ric_h[a][b] == doctest::Approx(w.ricci[a][b] + w.hess_h[a][b]));
  }
}

TEST_CASE("drift Laplacian examples") {
  const WeightedManifold line = ts::interval(-3.0, 3.0, "x1^2/2");
  const double two[] = {2.0}, one[] = {1.0}, zero[] = {0.0};
  CHECK(drift_laplacian_at(line, parse("x1", 1), two) == doctest::Approx(-2.0));
  CHECK(drift_laplacian_at(line, parse("x1^2 - 1", 1), one) == doctest::Approx(0.0));
  CHECK(drift_laplacian_at(line, parse("x1^2 - 1", 1), zero) == doctest::Approx(2.0));

  const WeightedManifold s2 = unit_sphere();
  const double p[] = {kPi / 3.0, 0.4};
  CHECK(drift_laplacian_at(s2, parse("cos(x1)", 2), p) == doctest::Approx(-1.0));
}

TEST_CASE("drift Laplacian product rule") {
  const WeightedManifold m = ts::manifold({ts::axis(0.5, 1.5), ts::axis(0.0, 1.0)},
                                          {"1 + x2^2", "0.3*x1*x2", "exp(x1)"}, "sin(x1)*x2");
  ts::ExpressionGenerator gen(2, 21);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const std::string u = gen.next(2), v = gen.next(2);
    const Expr eu = parse(u, 2), ev = parse(v, 2);
    const auto p = ts::random_point(rng, 2, 0.55, 0.95);
    const double lhs = drift_laplacian_at(m, parse("(" + u + ")*(" + v + ")", 2), p);
    const LocalGeometry geo(m, p, 2);
    const Jet ju = geo.chart_jet(eu, 2), jv = geo.chart_jet(ev, 2);
    const double rhs = eu.evaluate(std::span<const double>(p)) * drift_laplacian_at(m, ev, p) +
                       ev.evaluate(std::span<const double>(p)) * drift_laplacian_at(m, eu, p) +
                       2.0 * geo.inner_gradients(ju, jv).value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("margin scans") {
  SamplePlan plan = grid({16, 16});
  plan.inset = 1e-3;
  const MarginStats disk = ric_h_margin_scan(ts::polar_disk("x1^2/2"), plan, 0.5);
  CHECK(disk.min == doctest::Approx(0.5));
  CHECK(disk.argmin[0] == doctest::Approx(1.0));

  const WeightedManifold cap = ts::sphere_chart(0.0, kPi / 2.0, EndKind::Singular, EndKind::Boundary);
  for (double c : {0.1, 1.0, 7.0}) {
    const MarginStats s = ric_h_margin_scan(cap, plan, c);
    CHECK(s.min == doctest::Approx(1.0));
    CHECK(s.max == doctest::Approx(1.0));
  }

  const MarginStats flat = ric_h_margin_scan(ts::interval(0.0, 1.0), grid({100}), 1.0);
  CHECK(flat.min_lambda_ric_h == doctest::Approx(0.0));

  SamplePlan empty = grid({0, 0});
  CHECK_THROWS_AS(ric_h_margin_scan(cap, empty, 1.0), EmptyPlan);
}

TEST_CASE("margin decreases pointwise in c") {
  const WeightedManifold m = ts::polar_disk("x1^2/2 + 0.3*x1^4");
  SamplePlan plan = grid({12, 12});
  double prev = INFINITY;
  for (double c : {0.05, 0.1, 0.3, 0.7, 1.5}) {
    const MarginStats s = ric_h_margin_scan(m, plan, c);
    CHECK(s.min <= prev);
    prev = s.min;
  }
}

TEST_CASE("boundary geometry examples") {
  const WeightedManifold line = ts::interval(-2.0, 2.0, "x1^2/2");
  const BoundaryPointData right = boundary_geometry(line, Face{0, 1}, 0.0);
  CHECK(right.mean_curvature == 0.0);
  CHECK(right.weighted_mean_curvature == doctest::Approx(-2.0));
  CHECK(right.eta[0] == doctest::Approx(1.0));

  const WeightedManifold cap = ts::sphere_chart(0.0, kPi / 2.0, EndKind::Singular, EndKind::Boundary);
  for (double s : {0.0, 1.0, 4.0}) {
    const BoundaryPointData eq = boundary_geometry(cap, Face{0, 1}, s);
    CHECK(std::abs(eq.second_fundamental_form) < 1e-12);
    CHECK(std::abs(eq.weighted_mean_curvature) < 1e-12);
  }

  const WeightedManifold disk = ts::polar_disk("0");
  const BoundaryPointData rim = boundary_geometry(disk, Face{0, 1}, 0.7);
  CHECK(rim.mean_curvature == doctest::Approx(1.0));
  CHECK(rim.weighted_mean_curvature == doctest::Approx(1.0));

  CHECK_THROWS_AS(boundary_geometry(disk, Face{1, 1}, 0.2), PeriodicFace);
  CHECK_THROWS_AS(boundary_geometry(disk, Face{0, 0}, 0.2), SingularFace);
}

TEST_CASE("outward normal has unit length") {
  const WeightedManifold m = ts::manifold({ts::axis(0.5, 1.5), ts::axis(0.0, 1.0)},
                                          {"1 + x2^2", "0.3*x1*x2", "exp(x1)"}, "x1*x2");
  for (const Face& f : boundary_faces(m.domain())) {
    for (double s : {0.1, 0.6, 0.9}) {
      const double t = f.axis == 0 ? s : 0.5 + s;
      const BoundaryPointData b = boundary_geometry(m, f, t);
      double g[2][2];
      m.fields().metric_values(std::span<const double>(b.point.data(), 2), g);
      double n2 = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) n2 += g[i][j] * b.eta[i] * b.eta[j];
      CHECK(std::abs(n2 - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("sample plans stay in the inset closure") {
  const WeightedManifold cap = ts::sphere_chart(0.0, kPi / 2.0, EndKind::Singular, EndKind::Boundary);
  SamplePlan plan = grid({9, 7});
  plan.inset = 1e-2;
  const auto pts = sample_points(cap.domain(), plan);
  CHECK(pts.size() == 63);
  for (const Point& p : pts) {
    CHECK(p[0] >= 1e-2);
    CHECK(p[0] <= kPi / 2.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] < 2.0 * kPi);
  }
  plan.mode = SampleMode::LowDiscrepancy;
  const auto halton = sample_points(cap.domain(), plan);
  CHECK(halton.size() == 63);
  for (const Point& p : halton) CHECK(p[0] >= 1e-2);
}

TEST_CASE("degenerate metrics are rejected") {
  const WeightedManifold bad = ts::manifold({ts::axis(-1.0, 1.0)}, {"x1"}, "0");
  CHECK_THROWS_AS(bad.validate(), DegenerateMetric);
  const double p[] = {-0.5};
  CHECK_THROWS_AS(curvature_at(bad, p), DegenerateMetric);
  CHECK_NOTHROW(unit_sphere().validate());
}

}
