#include "bakry/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bakry/errors.hpp"

namespace bakry {
namespace {

std::array<Jet, 3> map_jets(const Immersion& imm, std::span<const double> p, int order) {
  std::array<Jet, 3> F;
  for (int a = 0; a < 3; ++a) F[a] = eval_jet(imm.map[a], p.first(2), order);
  return F;
}

std::array<double, 3> values(const std::array<Jet, 3>& v) { return {v[0].value(), v[1].value(), v[2].value()}; }

Jet ambient_jet(const Immersion& imm, const std::array<double, 3>& y, int order) {
  return eval_jet(imm.ambient_weight, std::span<const double>(y.data(), 3), order);
}

std::string point_text(std::span<const double> p) {
  std::ostringstream os;
  os << "(" << p[0] << ", " << p[1] << ")";
  return os.str();
}

}  // namespace

Immersion Immersion::with_weight_sign(int sign) const {
  Immersion out = *this;
  if (sign < 0) out.ambient_weight = Expr::negate(ambient_weight);
  return out;
}

Immersion Immersion::flipped() const {
  Immersion out = *this;
  out.orientation = orientation == Orientation::Plus ? Orientation::Minus : Orientation::Plus;
  return out;
}

JetMatrix PullbackFields::metric(std::span<const double> p, int order) const {
  if (order + 1 > kMaxJetOrder) throw InvalidParameter("pullback metric jets are limited to order 3");
  const auto F = map_jets(imm_, p, order + 1);
  JetMatrix g;
  std::array<std::array<Jet, 3>, 2> dF;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) dF[i][a] = F[a].derivative(i);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      Jet s = dF[i][0] * dF[j][0];
      s += dF[i][1] * dF[j][1];
      s += dF[i][2] * dF[j][2];
      g[i][j] = s;
      g[j][i] = s;
    }
  return g;
}

Jet PullbackFields::weight(std::span<const double> p, int order) const {
  const auto F = map_jets(imm_, p, order);
  return substitute(ambient_jet(imm_, values(F), order), F);
}

void PullbackFields::metric_values(std::span<const double> p, double g[2][2]) const {
  const JetMatrix m = metric(p, 0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g[i][j] = m[i][j].value();
}

double PullbackFields::weight_value(std::span<const double> p) const {
  std::array<double, 3> y{};
  for (int a = 0; a < 3; ++a) y[a] = imm_.map[a].evaluate(p.first(2));
  return imm_.ambient_weight.evaluate(y);
}

std::string PullbackFields::describe() const {
  std::ostringstream os;
  os << "immersion (" << imm_.map[0].to_string() << ", " << imm_.map[1].to_string() << ", " << imm_.map[2].to_string()
     << ") ambient weight " << imm_.ambient_weight.to_string();
  return os.str();
}

WeightedManifold induced_manifold(const Immersion& imm) {
  if (imm.domain.dim() != 2) throw DimensionMismatch("an immersion needs a 2D chart");
  return WeightedManifold(imm.domain, std::make_shared<PullbackFields>(imm));
}

LocalSurface::LocalSurface(const Immersion& imm, std::span<const double> p, int order) : order_(order) {
  if (order < 2 || order > kMaxJetOrder) throw InvalidParameter("surface jet order must be in [2, 4]");
  if (imm.shape_sign != 1 && imm.shape_sign != -1) throw InvalidParameter("shape sign must be +1 or -1");
  F_ = map_jets(imm, p, order);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) dF_[i][a] = F_[a].derivative(i);

  const auto& u = dF_[0];
  const auto& v = dF_[1];
  std::array<Jet, 3> cross = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  Jet norm2 = cross[0] * cross[0];
  norm2 += cross[1] * cross[1];
  norm2 += cross[2] * cross[2];
  double lu = 0.0, lv = 0.0;
  for (int a = 0; a < 3; ++a) {
    lu += u[a].value() * u[a].value();
    lv += v[a].value() * v[a].value();
  }
  if (!(norm2.value() > 1e-24 * lu * lv) || !std::isfinite(norm2.value())) {
    throw RankDeficient("dF has rank < 2 at " + point_text(p));
  }
  const double sign = imm.orientation == Orientation::Plus ? 1.0 : -1.0;
  const Jet inv_norm = sign * pow(norm2, -0.5);
  for (int a = 0; a < 3; ++a) nu_[a] = cross[a] * inv_norm;

  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      Jet s = dF_[i][0] * dF_[j][0];
      s += dF_[i][1] * dF_[j][1];
      s += dF_[i][2] * dF_[j][2];
      g_[i][j] = s;
      g_[j][i] = s;
    }
  const Jet det = g_[0][0] * g_[1][1] - g_[0][1] * g_[0][1];
  const Jet inv_det = reciprocal(det);
  ginv_[0][0] = g_[1][1] * inv_det;
  ginv_[1][1] = g_[0][0] * inv_det;
  ginv_[0][1] = -(g_[0][1] * inv_det);
  ginv_[1][0] = ginv_[0][1];

  // a_ij = -s <nu, d_i d_j F>
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      Jet s = Jet::constant(2, order - 2, 0.0);
      for (int a = 0; a < 3; ++a) s += nu_[a] * dF_[i][a].derivative(j);
      a_[i][j] = -static_cast<double>(imm.shape_sign) * s;
      a_[j][i] = a_[i][j];
    }
  H_ = Jet::constant(2, order - 2, 0.0);
  A2_ = Jet::constant(2, order - 2, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      H_ += ginv_[i][j] * a_[i][j];
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) A2_ += ginv_[i][k] * ginv_[j][l] * a_[i][j] * a_[k][l];
    }

  const auto y = values(F_);
  const Jet amb = ambient_jet(imm, y, order);
  h_ = substitute(amb, F_);
  h_nu_ = Jet::constant(2, order - 1, 0.0);
  hess_nu_nu_ = Jet::constant(2, order - 2, 0.0);
  for (int a = 0; a < 3; ++a) {
    const Jet da = amb.derivative(a);
    grad_hbar_[a] = substitute(da, F_);
    h_nu_ += grad_hbar_[a] * nu_[a];
    for (int b = 0; b < 3; ++b) hess_nu_nu_ += substitute(da.derivative(b), F_) * nu_[a] * nu_[b];
  }
  const Jet3 j3 = eval_jet(imm.ambient_weight, std::span<const double>(y.data(), 3));
  hess_ = j3.hess;
  third_ = j3.third;
}

ShapePointData shape_at(const Immersion& imm, std::span<const double> p) {
  const LocalSurface s(imm, p, 2);
  ShapePointData out;
  std::copy_n(p.begin(), 2, out.point.begin());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.g[i][j] = s.g(i, j).value();
      out.a[i][j] = s.a(i, j).value();
    }
  for (int a = 0; a < 3; ++a) {
    out.position[a] = s.position(a).value();
    out.normal[a] = s.normal(a).value();
    out.ambient_gradient[a] = s.ambient_gradient(a).value();
    for (int b = 0; b < 3; ++b) out.ambient_hessian[a][b] = s.ambient_hessian(a, b);
  }
  out.mean_curvature = s.mean_curvature().value();
  out.norm2_A = s.norm2_A().value();
  out.normal_derivative = s.normal_derivative().value();
  out.weighted_mean_curvature = out.mean_curvature - out.normal_derivative;
  out.ambient_ric_h_nu_nu = s.hess_nu_nu().value();
  return out;
}

MarginStats h_minimality_residual(const Immersion& imm, const SamplePlan& plan) {
  MarginStats stats;
  for (const Point& p : sample_points(imm.domain, plan)) {
    const ShapePointData d = shape_at(imm, p);
    stats.add(std::abs(d.weighted_mean_curvature), p);
  }
  stats.finish();
  return stats;
}

SplittingResidual splitting_residual(const Immersion& imm, const Expr& f, std::span<const double> p) {
  const LocalSurface s(imm, p, 2);
  const WeightedManifold m = induced_manifold(imm);
  const LocalGeometry geo(m, p, 1);

  std::array<double, 3> y{};
  std::array<Jet, 3> F;
  for (int a = 0; a < 3; ++a) {
    F[a] = s.position(a);
    y[a] = F[a].value();
  }
  const Jet fa = eval_jet(f, std::span<const double>(y.data(), 3), 2);
  const Jet fc = substitute(fa, F);

  double lap_bar = 0.0, f_nu = 0.0, hess_nu = 0.0, grad_dot = 0.0;
  for (int a = 0; a < 3; ++a) {
    lap_bar += fa.d(a, a);
    const double na = s.normal(a).value();
    f_nu += fa.d(a) * na;
    grad_dot += s.ambient_gradient(a).value() * fa.d(a);
    for (int b = 0; b < 3; ++b) hess_nu += fa.d(a, b) * na * s.normal(b).value();
  }
  const double H = s.mean_curvature().value();
  const double Hh = H - s.normal_derivative().value();

  SplittingResidual r;
  r.ambient_laplacian = lap_bar;
  r.intrinsic_laplacian = geo.laplacian(fc).value();
  r.ambient_drift_laplacian = lap_bar - grad_dot;
  r.intrinsic_drift_laplacian = geo.drift_laplacian(fc).value();
  r.plain = std::abs(r.ambient_laplacian - (r.intrinsic_laplacian + H * f_nu + hess_nu));
  r.drift = std::abs(r.ambient_drift_laplacian - (r.intrinsic_drift_laplacian + Hh * f_nu + hess_nu));
  return r;
}

IdentityResidual mean_curvature_identity(const Immersion& imm, const Expr& f, std::span<const double> p) {
  const LocalSurface s(imm, p, 4);
  const WeightedManifold m = induced_manifold(imm);
  const LocalGeometry geo(m, p, 1);
  const Jet fj = eval_jet(f, p.first(2), 2);
  const Jet& H = s.mean_curvature();
  const Jet u = fj * H;

  IdentityResidual r;
  r.lhs = geo.drift_laplacian(u).value() + (s.norm2_A().value() + s.hess_nu_nu().value()) * u.value();

  double e[2][3], nu[3];
  for (int a = 0; a < 3; ++a) {
    nu[a] = s.normal(a).value();
    for (int i = 0; i < 2; ++i) e[i][a] = s.tangent(i, a).value();
  }
  auto t3 = [&](const double* x, const double* yv, const double* z) {
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) acc += s.ambient_third(a, b, c) * x[a] * yv[b] * z[c];
    return acc;
  };
  double gi[2][2], aij[2][2], hb[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      gi[i][j] = s.g_inv(i, j).value();
      aij[i][j] = s.a(i, j).value();
      double acc = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += e[i][a] * s.ambient_hessian(a, b) * e[j][b];
      hb[i][j] = acc;
    }
  // Traces over an orthonormal frame become contractions with g^{-1}.
  double third_inu = 0.0, third_nuii = 0.0, a_hess = 0.0, transport = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      third_inu += gi[i][j] * t3(e[i], nu, e[j]);
      third_nuii += gi[i][j] * t3(nu, e[i], e[j]);
      transport += gi[i][j] * H.d(i) * fj.d(j);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) a_hess += gi[i][j] * aij[j][k] * gi[k][l] * hb[l][i];
    }
  const double fv = fj.value();
  r.rhs = fv * (2.0 * third_inu - third_nuii + 2.0 * a_hess) + 2.0 * transport +
          H.value() * geo.drift_laplacian(fj).value();
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

StabilityProblem build_stability_problem(const Immersion& imm, const Mesh& mesh, int fourier_mode,
                                         int quadrature_order) {
  const WeightedManifold m = induced_manifold(imm);
  auto potential = [&](const Point& x) {
    const LocalSurface s(imm, std::span<const double>(x.data(), 2), 2);
    return s.norm2_A().value() + s.hess_nu_nu().value();
  };
  if (mesh.axisymmetric) {
    // The reduction also needs a potential independent of x2.
    const Axis& a0 = imm.domain.axes[0];
    const Axis& a1 = imm.domain.axes[1];
    for (int i = 1; i < 8; ++i) {
      Point x{a0.lo + i * a0.length() / 8.0, a1.lo, 0.0};
      const double ref = potential(x);
      for (int j = 1; j < 5; ++j) {
        x[1] = a1.lo + j * a1.length() / 5.0;
        if (std::abs(potential(x) - ref) > 1e-10 * (1.0 + std::abs(ref))) {
          throw NotAxisymmetric("stability potential depends on x2");
        }
      }
    }
  }
  StabilityProblem sp;
  sp.mesh = mesh;
  sp.fourier_mode = fourier_mode;
  AssemblyOptions opts;
  opts.quadrature_order = quadrature_order;
  opts.fourier_mode = fourier_mode;
  AssembledProblem full = assemble(m, mesh, opts);
  sp.potential = assemble_weighted_mass(m, mesh, quadrature_order, potential);
  full.K = full.K - sp.potential;
  sp.full_form = full.K;
  const bool closed = boundary_faces(imm.domain).empty();
  sp.form = apply_bc(full, closed ? BoundaryCondition::None : BoundaryCondition::Dirichlet, mesh);
  return sp;
}

double stability_form_matrix(const StabilityProblem& sp, const Eigen::VectorXd& full) {
  return full.dot(sp.full_form * full);
}

double stability_form_direct(const Immersion& imm, const StabilityProblem& sp, const Eigen::VectorXd& full) {
  const WeightedManifold m = induced_manifold(imm);
  const double k2 = static_cast<double>(sp.fourier_mode) * sp.fourier_mode;
  const int dim = sp.mesh.dim;
  return integrate_p1(
      sp.mesh, m, full,
      [&](const P1Sample& s) {
        double grad2 = 0.0;
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) grad2 += s.g_inv[i][j] * s.grad[i] * s.grad[j];
        if (sp.mesh.axisymmetric) grad2 += k2 * s.g_inv[1][1] * s.value * s.value;
        const LocalSurface surf(imm, std::span<const double>(s.x.data(), 2), 2);
        const double v = surf.norm2_A().value() + surf.hess_nu_nu().value();
        return grad2 - v * s.value * s.value;
      },
      sp.form.quadrature_order);
}

StabilityResult stability_verdict(const Immersion& imm, const Mesh& mesh, const StabilityOptions& opts) {
  StabilityResult out;
  out.tolerance = opts.tol;
  out.closed = boundary_faces(imm.domain).empty();
  const int modes = mesh.axisymmetric ? opts.max_fourier_mode : 0;
  EigenOptions eo = opts.eigen;
  eo.count = opts.count;
  for (int k = 0; k <= modes; ++k) {
    const StabilityProblem sp = build_stability_problem(imm, mesh, k, opts.quadrature_order);
    EigenResult er = smallest_eigenpairs(sp.form, eo);
    out.mode_minima.push_back(er.eigenvalues[0]);
    if (k == 0) {
      out.dofs = sp.form.size();
      const Eigen::VectorXd v = expand_to_full(sp.form, mesh, er.eigenvectors.col(0));
      out.q_check_matrix = stability_form_matrix(sp, v);
      out.q_check_direct = stability_form_direct(imm, sp, v);
      if (out.closed) {
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_dofs);
        out.q_one_matrix = stability_form_matrix(sp, ones);
        out.q_one_direct = stability_form_direct(imm, sp, ones);
      }
    }
    if (k == 0 || er.eigenvalues[0] < out.mu1) {
      out.mu1 = er.eigenvalues[0];
      out.fourier_mode = k;
      out.eigen = std::move(er);
    }
  }
  out.stable = out.mu1 >= -opts.tol;
  return out;
}

Thm2Report thm2_check(const Immersion& imm, double c, const SamplePlan& plan, double tol) {
  if (!(c > 0.0)) throw InvalidParameter("the curvature condition needs c > 0");
  const WeightedManifold m = induced_manifold(imm);
  const auto pts = sample_points(imm.domain, plan);
  const std::string desc = plan.describe();

  MarginStats hmin, third, absH;
  Thm2Report rep;
  bool any_h = false;
  for (const Point& p : pts) {
    const std::span<const double> pp(p.data(), 2);
    const LocalSurface s(imm, pp, 3);
    const double H = s.mean_curvature().value();
    hmin.add(-std::abs(H - s.normal_derivative().value()), p);
    double t2 = 0.0, hess2 = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        hess2 += s.ambient_hessian(a, b) * s.ambient_hessian(a, b);
        for (int d = 0; d < 3; ++d) t2 += s.ambient_third(a, b, d) * s.ambient_third(a, b, d);
      }
    third.add(-std::sqrt(t2), p);
    absH.add(std::abs(H), p);
    if (H == 0.0) continue;
    const LocalGeometry geo(m, pp, 2);
    const double ric_h = geo.lambda_min(geo.bakry_emery());
    const double grad_h2 = geo.gradient_norm2(geo.weight()).value();
    double grad_H2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) grad_H2 += s.g_inv(i, j).value() * s.mean_curvature().d(i) * s.mean_curvature().d(j);
    const double rhs = 2.0 * (s.norm2_A().value() + c * grad_h2 + (hess2 + grad_H2) / (H * H));
    rep.condition.add(ric_h - rhs, p);
    any_h = true;
  }
  hmin.finish();
  third.finish();
  absH.finish();
  rep.condition.finish();

  auto push = [&](HypothesisCheck chk, const MarginStats& st) {
    chk.argmin = st.argmin;
    rep.hypotheses.push_back(std::move(chk));
  };
  push(make_check("h_minimal", hmin.min, tol, false, desc), hmin);
  push(make_check("parallel_hessian", third.min, tol, false, desc), third);
  push(make_check("mean_curvature_nonzero", absH.min, tol, true, desc), absH);

  const auto bsamples = boundary_samples(imm.domain, plan);
  if (bsamples.empty()) {
    HypothesisCheck chk = make_check("boundary_weighted_mean_curvature", 0.0, tol, false, desc);
    chk.note = "no boundary faces; holds vacuously";
    rep.hypotheses.push_back(chk);
  } else {
    MarginStats bs;
    for (const BoundarySample& b : bsamples) {
      const BoundaryPointData bd = boundary_geometry(m, b.face, b.s);
      bs.add(bd.weighted_mean_curvature, bd.point);
    }
    bs.finish();
    push(make_check("boundary_weighted_mean_curvature", bs.min, tol, false, desc), bs);
  }
  if (any_h) {
    push(make_check("curvature_condition", rep.condition.min, tol, false, desc), rep.condition);
  } else {
    HypothesisCheck chk = make_check("curvature_condition", std::numeric_limits<double>::quiet_NaN(), tol, false, desc);
    chk.note = "H vanishes at every sample point; condition undefined";
    rep.hypotheses.push_back(chk);
  }
  rep.all_pass = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [](const HypothesisCheck& h) { return h.pass; });
  return rep;
}

std::vector<ConventionEntry> convention_survey(const Immersion& imm, const Expr& f, const SamplePlan& plan) {
  std::vector<ConventionEntry> out;
  const auto pts = sample_points(imm.domain, plan);
  for (int s : {1, -1})
    for (int w : {1, -1}) {
      Immersion variant = imm.with_weight_sign(w);
      variant.shape_sign = s;
      ConventionEntry e;
      e.shape_sign = s;
      e.weight_sign = w;
      e.h_minimality = h_minimality_residual(variant, plan).max;
      for (const Point& p : pts)
        e.identity = std::max(e.identity, mean_curvature_identity(variant, f, std::span<const double>(p.data(), 2)).residual);
      out.push_back(e);
    }
  return out;
}

}  // namespace bakry
