#include "bakry/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bakry/errors.hpp"

namespace bakry {

std::vector<Face> boundary_faces(const Domain& domain) {
  std::vector<Face> faces;
  for (int a = 0; a < domain.dim(); ++a) {
    const Axis& ax = domain.axes[a];
    if (ax.periodic) continue;
    if (ax.lo_end == EndKind::Boundary) faces.push_back({a, 0});
    if (ax.hi_end == EndKind::Boundary) faces.push_back({a, 1});
  }
  return faces;
}

const Expr& ChartMetric::at(int i, int j) const {
  if (dim == 1) return components[0];
  if (i == 0 && j == 0) return components[0];
  if (i == 1 && j == 1) return components[2];
  return components[1];
}

void FieldSource::metric_values(std::span<const double> p, double g[2][2]) const {
  const JetMatrix m = metric(p, 0);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) g[i][j] = m[i][j].value();
}

double FieldSource::weight_value(std::span<const double> p) const { return weight(p, 0).value(); }

ExpressionFields::ExpressionFields(ChartMetric metric, Expr weight) : metric_(std::move(metric)), weight_(std::move(weight)) {
  if (metric_.dim != 1 && metric_.dim != 2) throw DimensionMismatch("chart metric dimension must be 1 or 2");
  const int ncomp = metric_.dim == 1 ? 1 : 3;
  for (int c = 0; c < ncomp; ++c) {
    if (metric_.components[c].empty()) throw DimensionMismatch("metric component missing");
    if (metric_.components[c].arity() > metric_.dim) throw DimensionMismatch("metric component uses too many variables");
  }
  if (weight_.empty() || weight_.arity() > metric_.dim) throw DimensionMismatch("weight uses too many variables");
}

JetMatrix ExpressionFields::metric(std::span<const double> p, int order) const {
  JetMatrix m;
  const int n = metric_.dim;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m[i][j] = eval_jet(metric_.at(i, j), p.first(n), order);
      m[j][i] = m[i][j];
    }
  return m;
}

Jet ExpressionFields::weight(std::span<const double> p, int order) const { return eval_jet(weight_, p.first(metric_.dim), order); }

void ExpressionFields::metric_values(std::span<const double> p, double g[2][2]) const {
  const int n = metric_.dim;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g[i][j] = g[j][i] = metric_.at(i, j).evaluate(p.first(n));
}

double ExpressionFields::weight_value(std::span<const double> p) const { return weight_.evaluate(p.first(metric_.dim)); }

std::string ExpressionFields::describe() const {
  std::ostringstream os;
  os << "metric{";
  for (int c = 0; c < (metric_.dim == 1 ? 1 : 3); ++c) os << (c ? ", " : "") << metric_.components[c].to_string();
  os << "} weight " << weight_.to_string();
  return os.str();
}

WeightedManifold::WeightedManifold(Domain domain, std::shared_ptr<const FieldSource> fields)
    : domain_(std::move(domain)), fields_(std::move(fields)) {
  if (!fields_) throw InvalidParameter("weighted manifold needs a field source");
  if (fields_->dim() != domain_.dim()) throw DimensionMismatch("field source and domain dimensions differ");
  for (const Axis& ax : domain_.axes)
    if (!(ax.hi > ax.lo)) throw InvalidParameter("axis range must be increasing");
}

WeightedManifold WeightedManifold::from_expressions(Domain domain, ChartMetric metric, Expr weight) {
  return WeightedManifold(std::move(domain), std::make_shared<ExpressionFields>(std::move(metric), std::move(weight)));
}

void WeightedManifold::validate() const {
  const int n = dim();
  const int per_axis = n == 1 ? 1000 : 100;
  Point p{};
  auto check = [&]() {
    double g[2][2];
    fields_->metric_values(p, g);
    const double det = n == 1 ? g[0][0] : g[0][0] * g[1][1] - g[0][1] * g[0][1];
    if (!(g[0][0] > 0.0) || !(det > 0.0) || !std::isfinite(det)) {
      std::ostringstream os;
      os << "metric not positive definite at (" << p[0];
      if (n == 2) os << ", " << p[1];
      os << ")";
      throw DegenerateMetric(os.str());
    }
    if (!std::isfinite(fields_->weight_value(p))) throw DegenerateMetric("weight not finite");
  };
  auto coord = [&](int axis, int i) {
    const Axis& ax = domain_.axes[axis];
    return ax.lo + (i + 0.5) * ax.length() / per_axis;
  };
  for (int i = 0; i < per_axis; ++i) {
    p[0] = coord(0, i);
    if (n == 1) {
      check();
      continue;
    }
    for (int j = 0; j < per_axis; ++j) {
      p[1] = coord(1, j);
      check();
    }
  }
}

LocalGeometry::LocalGeometry(const WeightedManifold& m, std::span<const double> p, int order) : n_(m.dim()), order_(order) {
  if (order < 1 || order > kMaxJetOrder) throw InvalidParameter("local geometry order must be in [1, 4]");
  std::copy_n(p.begin(), n_, p_.begin());
  g_ = m.fields().metric(point(), order);
  h_ = m.fields().weight(point(), order);
  if (n_ == 1) {
    det_ = g_[0][0];
    if (!(det_.value() > 0.0)) throw DegenerateMetric("det g <= 0 at x1 = " + std::to_string(p_[0]));
    ginv_[0][0] = reciprocal(g_[0][0]);
  } else {
    det_ = g_[0][0] * g_[1][1] - g_[0][1] * g_[0][1];
    if (!(det_.value() > 0.0) || !(g_[0][0].value() > 0.0)) {
      throw DegenerateMetric("det g <= 0 at (" + std::to_string(p_[0]) + ", " + std::to_string(p_[1]) + ")");
    }
    const Jet inv_det = reciprocal(det_);
    ginv_[0][0] = g_[1][1] * inv_det;
    ginv_[1][1] = g_[0][0] * inv_det;
    ginv_[0][1] = -(g_[0][1] * inv_det);
    ginv_[1][0] = ginv_[0][1];
  }
  // Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  std::array<std::array<std::array<Jet, 2>, 2>, 2> dg;  // dg[l][i][j] = d_l g_ij
  for (int l = 0; l < n_; ++l)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) dg[l][i][j] = g_[i][j].derivative(l);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        Jet acc = Jet::constant(n_, order - 1, 0.0);
        for (int l = 0; l < n_; ++l) acc += ginv_[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma_[k][i][j] = 0.5 * acc;
        gamma_[k][j][i] = gamma_[k][i][j];
      }
}

Jet LocalGeometry::chart_jet(const Expr& f, int order) const { return eval_jet(f, point(), order); }

Jet LocalGeometry::inner_gradients(const Jet& u, const Jet& v) const {
  Jet acc = Jet::constant(n_, kMaxJetOrder, 0.0);
  for (int i = 0; i < n_; ++i) {
    const Jet ui = u.derivative(i);
    for (int j = 0; j < n_; ++j) acc += ginv_[i][j] * ui * v.derivative(j);
  }
  return acc;
}

JetMatrix LocalGeometry::hessian(const Jet& f) const {
  JetMatrix h;
  std::array<Jet, 2> df;
  for (int k = 0; k < n_; ++k) df[k] = f.derivative(k);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      Jet hij = df[i].derivative(j);
      for (int k = 0; k < n_; ++k) hij -= gamma_[k][i][j] * df[k];
      h[i][j] = hij;
      h[j][i] = hij;
    }
  return h;
}

Jet LocalGeometry::laplacian(const Jet& f) const {
  const JetMatrix h = hessian(f);
  Jet acc = Jet::constant(n_, kMaxJetOrder, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) acc += ginv_[i][j] * h[i][j];
  return acc;
}

Jet LocalGeometry::drift_laplacian(const Jet& f) const { return laplacian(f) - inner_gradients(h_, f); }

JetMatrix LocalGeometry::ricci() const {
  if (order_ < 2) throw InvalidParameter("Ricci curvature needs metric jets of order >= 2");
  JetMatrix r;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      Jet acc = Jet::constant(n_, order_ - 2, 0.0);
      for (int k = 0; k < n_; ++k) {
        acc += gamma_[k][i][j].derivative(k);
        acc -= gamma_[k][i][k].derivative(j);
        for (int l = 0; l < n_; ++l) {
          acc += gamma_[k][k][l] * gamma_[l][i][j];
          acc -= gamma_[k][j][l] * gamma_[l][i][k];
        }
      }
      r[i][j] = acc;
      r[j][i] = acc;
    }
  return r;
}

JetMatrix LocalGeometry::bakry_emery() const {
  JetMatrix r = ricci();
  const JetMatrix hh = hessian(h_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[i][j] += hh[i][j];
  return r;
}

Jet LocalGeometry::norm2(const JetMatrix& t) const {
  Jet acc = Jet::constant(n_, kMaxJetOrder, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) acc += ginv_[i][a] * ginv_[j][b] * t[i][j] * t[a][b];
  return acc;
}

Jet LocalGeometry::contract_gradients(const JetMatrix& t, const Jet& u, const Jet& v) const {
  std::array<Jet, 2> gu, gv;
  for (int i = 0; i < n_; ++i) {
    gu[i] = Jet::constant(n_, kMaxJetOrder, 0.0);
    gv[i] = Jet::constant(n_, kMaxJetOrder, 0.0);
    for (int j = 0; j < n_; ++j) {
      gu[i] += ginv_[i][j] * u.derivative(j);
      gv[i] += ginv_[i][j] * v.derivative(j);
    }
  }
  Jet acc = Jet::constant(n_, kMaxJetOrder, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) acc += t[i][j] * gu[i] * gv[j];
  return acc;
}

double LocalGeometry::lambda_min(const JetMatrix& t) const {
  if (n_ == 1) return t[0][0].value() / g_[0][0].value();
  // Work in a g-orthonormal frame so equal eigenvalues do not lose half the digits.
  const double l11 = std::sqrt(g_[0][0].value());
  const double l21 = g_[0][1].value() / l11;
  const double l22 = std::sqrt(g_[1][1].value() - l21 * l21);
  const double i11 = 1.0 / l11, i21 = -l21 / (l11 * l22), i22 = 1.0 / l22;
  const double t11 = t[0][0].value(), t12 = t[0][1].value(), t22 = t[1][1].value();
  const double s11 = i11 * i11 * t11;
  const double s12 = i11 * (i21 * t11 + i22 * t12);
  const double s22 = i21 * i21 * t11 + 2.0 * i21 * i22 * t12 + i22 * i22 * t22;
  return 0.5 * (s11 + s22) - std::hypot(0.5 * (s11 - s22), s12);
}

std::string SamplePlan::describe() const {
  std::ostringstream os;
  os << (mode == SampleMode::Grid ? "grid" : "halton") << " ";
  for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "x" : "") << counts[i];
  os << ", singular-end inset " << inset;
  return os.str();
}

namespace {

std::vector<double> axis_coordinates(const Axis& ax, int count, double inset) {
  std::vector<double> xs;
  if (ax.periodic) {
    for (int i = 0; i < count; ++i) xs.push_back(ax.lo + (i + 0.5) * ax.length() / count);
    return xs;
  }
  const double lo = ax.lo + (ax.lo_end == EndKind::Singular ? inset : 0.0);
  const double hi = ax.hi - (ax.hi_end == EndKind::Singular ? inset : 0.0);
  if (count <= 1) return {0.5 * (lo + hi)};
  for (int i = 0; i < count; ++i) xs.push_back(i == count - 1 ? hi : lo + i * (hi - lo) / (count - 1));
  return xs;
}

double radical_inverse(int base, int i) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

}  // namespace

std::vector<Point> sample_points(const Domain& domain, const SamplePlan& plan) {
  const int n = domain.dim();
  if (static_cast<int>(plan.counts.size()) < n) throw EmptyPlan("sample plan has fewer counts than the domain has axes");
  std::vector<Point> pts;
  if (plan.mode == SampleMode::Grid) {
    const auto xs = axis_coordinates(domain.axes[0], plan.counts[0], plan.inset);
    if (n == 1) {
      for (double x : xs) pts.push_back({x, 0.0, 0.0});
    } else {
      const auto ys = axis_coordinates(domain.axes[1], plan.counts[1], plan.inset);
      for (double x : xs)
        for (double y : ys) pts.push_back({x, y, 0.0});
    }
  } else {
    int total = 1;
    for (int a = 0; a < n; ++a) total *= plan.counts[a];
    static constexpr int kBases[] = {2, 3};
    for (int i = 1; i <= total; ++i) {
      Point p{};
      for (int a = 0; a < n; ++a) {
        const Axis& ax = domain.axes[a];
        const double lo = ax.lo + (!ax.periodic && ax.lo_end == EndKind::Singular ? plan.inset : 0.0);
        const double hi = ax.hi - (!ax.periodic && ax.hi_end == EndKind::Singular ? plan.inset : 0.0);
        p[a] = lo + radical_inverse(kBases[a], i) * (hi - lo);
      }
      pts.push_back(p);
    }
  }
  if (pts.empty()) throw EmptyPlan("sample plan produced no points");
  return pts;
}

std::vector<BoundarySample> boundary_samples(const Domain& domain, const SamplePlan& plan) {
  std::vector<BoundarySample> out;
  for (const Face& f : boundary_faces(domain)) {
    if (domain.dim() == 1) {
      out.push_back({f, 0.0});
      continue;
    }
    const int other = 1 - f.axis;
    const int count = plan.counts.size() > static_cast<std::size_t>(other) ? plan.counts[other] : 16;
    for (double s : axis_coordinates(domain.axes[other], count, plan.inset)) out.push_back({f, s});
  }
  return out;
}

void MarginStats::add(double v, const Point& p) {
  if (count == 0 || v < min) {
    min = v;
    argmin = p;
  }
  if (count == 0 || v > max) {
    max = v;
    argmax = p;
  }
  mean += v;
  ++count;
}

void MarginStats::finish() {
  if (count > 0) mean /= static_cast<double>(count);
}

CurvatureData curvature_at(const WeightedManifold& m, std::span<const double> p) {
  const LocalGeometry geo(m, p, 2);
  const int n = geo.dim();
  CurvatureData out;
  out.dim = n;
  std::copy_n(p.begin(), n, out.point.begin());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.christoffel[k][i][j] = geo.christoffel(k, i, j).value();
  const JetMatrix ric = geo.ricci();
  const JetMatrix hh = geo.hessian(geo.weight());
  JetMatrix be;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.ricci[i][j] = ric[i][j].value();
      out.hess_h[i][j] = hh[i][j].value();
      be[i][j] = ric[i][j] + hh[i][j];
      out.ric_h[i][j] = be[i][j].value();
    }
  out.grad_h_norm2 = geo.gradient_norm2(geo.weight()).value();
  out.lambda_min_ric_h = geo.lambda_min(be);
  return out;
}

double drift_laplacian_at(const WeightedManifold& m, const Expr& f, std::span<const double> p) {
  const LocalGeometry geo(m, p, 1);
  return geo.drift_laplacian(geo.chart_jet(f, 2)).value();
}

MarginStats ric_h_margin_scan(const WeightedManifold& m, const SamplePlan& plan, double c) {
  if (c < 0.0) throw InvalidParameter("c must be non-negative");
  const auto pts = sample_points(m.domain(), plan);
  MarginStats stats;
  double min_lambda = std::numeric_limits<double>::infinity();
  for (const Point& p : pts) {
    const CurvatureData cd = curvature_at(m, p);
    stats.add(cd.lambda_min_ric_h - c * cd.grad_h_norm2, p);
    min_lambda = std::min(min_lambda, cd.lambda_min_ric_h);
  }
  stats.finish();
  stats.min_lambda_ric_h = min_lambda;
  return stats;
}

Point face_point(const Domain& domain, const Face& face, double s) {
  Point p{};
  const Axis& ax = domain.axes[face.axis];
  p[face.axis] = face.side == 0 ? ax.lo : ax.hi;
  if (domain.dim() == 2) p[1 - face.axis] = s;
  return p;
}

BoundaryPointData boundary_geometry(const WeightedManifold& m, const Face& face, double s) {
  const Domain& dom = m.domain();
  if (face.axis < 0 || face.axis >= dom.dim()) throw InvalidParameter("face axis out of range");
  const Axis& ax = dom.axes[face.axis];
  if (ax.periodic) throw PeriodicFace("face of a periodic axis has no boundary");
  if ((face.side == 0 ? ax.lo_end : ax.hi_end) == EndKind::Singular) throw SingularFace("singular axis end has no boundary data");

  BoundaryPointData out;
  out.face = face;
  out.point = face_point(dom, face, s);
  const LocalGeometry geo(m, out.point, 1);
  const double sigma = face.sign();
  const int a = face.axis;
  const int n = geo.dim();
  const double gaa_inv = geo.g_inv(a, a).value();
  for (int k = 0; k < n; ++k) out.eta[k] = sigma * geo.g_inv(k, a).value() / std::sqrt(gaa_inv);
  double dh_eta = 0.0;
  const Jet& h = geo.weight();
  for (int k = 0; k < n; ++k) dh_eta += h.d(k) * out.eta[k];
  if (n == 2) {
    const int b = 1 - a;
    out.second_fundamental_form = -sigma * geo.christoffel(a, b, b).value() / (std::sqrt(gaa_inv) * geo.g(b, b).value());
  }
  out.mean_curvature = out.second_fundamental_form;
  out.weighted_mean_curvature = out.mean_curvature - dh_eta;
  return out;
}

}  // namespace bakry
