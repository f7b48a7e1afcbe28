#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bakry/expr.hpp"
#include "bakry/jet.hpp"

namespace bakry {

using Point = std::array<double, 3>;

enum class EndKind { Boundary, Singular };

/// One coordinate axis of a chart box. A periodic axis has no ends; a
/// singular end is a coordinate degeneracy (polar axis, sphere pole) where the
/// volume density vanishes and no boundary condition is imposed.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
  EndKind lo_end = EndKind::Boundary;
  EndKind hi_end = EndKind::Boundary;

  double length() const { return hi - lo; }
};

struct Domain {
  std::vector<Axis> axes;
  int dim() const { return static_cast<int>(axes.size()); }
};

/// A boundary face of the chart box: the end `side` (0 = lo, 1 = hi) of `axis`.
struct Face {
  int axis = 0;
  int side = 1;
  /// +1 for the hi end, -1 for the lo end (direction of the outward normal).
  double sign() const { return side == 0 ? -1.0 : 1.0; }
  int id() const { return 2 * axis + side; }
};

/// Faces that carry boundary data (non-periodic, non-singular ends).
std::vector<Face> boundary_faces(const Domain& domain);

/// Symmetric chart metric given by expressions: {g11} or {g11, g12, g22}.
struct ChartMetric {
  int dim = 1;
  std::array<Expr, 3> components;

  const Expr& at(int i, int j) const;
};

/// Row-major metric jets (entries past dim are unused).
using JetMatrix = std::array<std::array<Jet, 2>, 2>;

/// Source of the metric and weight on a chart. Expression-backed manifolds and
/// pullbacks through an immersion both implement it.
class FieldSource {
 public:
  virtual ~FieldSource() = default;
  virtual int dim() const = 0;
  virtual JetMatrix metric(std::span<const double> p, int order) const = 0;
  virtual Jet weight(std::span<const double> p, int order) const = 0;
  /// Plain values, used on quadrature-heavy paths.
  virtual void metric_values(std::span<const double> p, double g[2][2]) const;
  virtual double weight_value(std::span<const double> p) const;
  virtual bool weight_is_constant() const = 0;
  virtual std::string describe() const = 0;
};

class ExpressionFields final : public FieldSource {
 public:
  ExpressionFields(ChartMetric metric, Expr weight);
  int dim() const override { return metric_.dim; }
  JetMatrix metric(std::span<const double> p, int order) const override;
  Jet weight(std::span<const double> p, int order) const override;
  void metric_values(std::span<const double> p, double g[2][2]) const override;
  double weight_value(std::span<const double> p) const override;
  bool weight_is_constant() const override { return weight_.is_constant(); }
  std::string describe() const override;

  const ChartMetric& chart_metric() const { return metric_; }
  const Expr& weight_expr() const { return weight_; }

 private:
  ChartMetric metric_;
  Expr weight_;
};

/// The weighted manifold (M, g, e^{-h} dv) on a single chart box.
class WeightedManifold {
 public:
  WeightedManifold(Domain domain, std::shared_ptr<const FieldSource> fields);
  static WeightedManifold from_expressions(Domain domain, ChartMetric metric, Expr weight);

  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  const FieldSource& fields() const { return *fields_; }
  std::shared_ptr<const FieldSource> shared_fields() const { return fields_; }

  /// Checks metric positivity and weight finiteness on a 10^dim * 100 point
  /// grid strictly inside the chart box. Throws DegenerateMetric.
  void validate() const;

 private:
  Domain domain_;
  std::shared_ptr<const FieldSource> fields_;
};

/// Pointwise differential geometry at one chart point, carried as jets so
/// that derived quantities can be differentiated again.
///
/// `order` is the jet order of the metric and weight; Christoffel symbols have
/// order-1, Ricci order-2. Functions passed in must be jets at the same point.
class LocalGeometry {
 public:
  LocalGeometry(const WeightedManifold& m, std::span<const double> p, int order);

  int dim() const { return n_; }
  int order() const { return order_; }
  std::span<const double> point() const { return {p_.data(), static_cast<std::size_t>(n_)}; }

  const Jet& g(int i, int j) const { return g_[i][j]; }
  const Jet& g_inv(int i, int j) const { return ginv_[i][j]; }
  const Jet& det() const { return det_; }
  const Jet& weight() const { return h_; }
  /// Gamma^k_ij.
  const Jet& christoffel(int k, int i, int j) const { return gamma_[k][i][j]; }

  /// Jet of a chart expression at this point.
  Jet chart_jet(const Expr& f, int order) const;

  Jet inner_gradients(const Jet& u, const Jet& v) const;
  Jet gradient_norm2(const Jet& f) const { return inner_gradients(f, f); }
  JetMatrix hessian(const Jet& f) const;
  Jet laplacian(const Jet& f) const;
  Jet drift_laplacian(const Jet& f) const;
  JetMatrix ricci() const;
  JetMatrix bakry_emery() const;
  /// g^{ia} g^{jb} T_ij T_ab.
  Jet norm2(const JetMatrix& t) const;
  /// T(grad u, grad v) with gradients raised by the metric.
  Jet contract_gradients(const JetMatrix& t, const Jet& u, const Jet& v) const;

  /// Smallest eigenvalue of the symmetric tensor `t` relative to g (values only).
  double lambda_min(const JetMatrix& t) const;

 private:
  int n_;
  int order_;
  Point p_{};
  JetMatrix g_, ginv_;
  Jet det_, h_;
  std::array<std::array<std::array<Jet, 2>, 2>, 2> gamma_;
};

struct CurvatureData {
  int dim = 1;
  Point point{};
  std::array<std::array<std::array<double, 2>, 2>, 2> christoffel{};
  std::array<std::array<double, 2>, 2> ricci{};
  std::array<std::array<double, 2>, 2> hess_h{};
  std::array<std::array<double, 2>, 2> ric_h{};
  double grad_h_norm2 = 0.0;
  double lambda_min_ric_h = 0.0;
};

struct BoundaryPointData {
  Face face;
  Point point{};
  /// Outward unit normal, contravariant components.
  std::array<double, 2> eta{};
  /// Second fundamental form of the boundary curve w.r.t. eta (n = 2); 0 for n = 1.
  double second_fundamental_form = 0.0;
  double mean_curvature = 0.0;           // H of the boundary
  double weighted_mean_curvature = 0.0;  // H - <grad h, eta>
};

enum class SampleMode { Grid, LowDiscrepancy };

/// Finite sample of the chart box used to turn pointwise hypotheses into
/// checks. Non-periodic axes are inset by `inset` at both ends.
struct SamplePlan {
  SampleMode mode = SampleMode::Grid;
  std::vector<int> counts{16, 16};
  double inset = 1e-3;

  std::string describe() const;
};

std::vector<Point> sample_points(const Domain& domain, const SamplePlan& plan);

struct BoundarySample {
  Face face;
  double s = 0.0;  // coordinate along the face (ignored for n = 1)
};

std::vector<BoundarySample> boundary_samples(const Domain& domain, const SamplePlan& plan);

struct MarginStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  Point argmin{};
  Point argmax{};
  std::size_t count = 0;
  /// Only filled by ric_h_margin_scan: min over the plan of lambda_min(Ric_h).
  double min_lambda_ric_h = 0.0;

  void add(double v, const Point& p);
  void finish();
};

CurvatureData curvature_at(const WeightedManifold& m, std::span<const double> p);

/// Drift Laplacian Delta f - <grad h, grad f> at p.
double drift_laplacian_at(const WeightedManifold& m, const Expr& f, std::span<const double> p);

/// Statistics of rho_c = lambda_min(Ric_h) - c |grad h|^2 over the plan.
MarginStats ric_h_margin_scan(const WeightedManifold& m, const SamplePlan& plan, double c);

BoundaryPointData boundary_geometry(const WeightedManifold& m, const Face& face, double s);

/// Chart point on `face` at parameter s.
Point face_point(const Domain& domain, const Face& face, double s);

}  // namespace bakry
