#include "bakry/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bakry/errors.hpp"

namespace bakry {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Violated: return "violated";
    case Verdict::HypothesesNotMet: return "hypotheses-not-met";
  }
  return "hypotheses-not-met";
}

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::None: return "none";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
  }
  return "none";
}

IdentitySides bochner_at(const WeightedManifold& m, const Expr& f, std::span<const double> p) {
  const LocalGeometry geo(m, p, 2);
  const Jet fj = geo.chart_jet(f, 3);
  IdentitySides s;
  s.lhs = 0.5 * geo.drift_laplacian(geo.gradient_norm2(fj)).value();
  const double hess2 = geo.norm2(geo.hessian(fj)).value();
  const double transport = geo.inner_gradients(fj, geo.drift_laplacian(fj)).value();
  const double ric = geo.contract_gradients(geo.bakry_emery(), fj, fj).value();
  s.rhs = hess2 + transport + ric;
  s.residual = std::abs(s.lhs - s.rhs);
  return s;
}

double bochner_residual(const WeightedManifold& m, const Expr& f, std::span<const Point> points) {
  double worst = 0.0;
  for (const Point& p : points) worst = std::max(worst, bochner_at(m, f, p).residual);
  return worst;
}

double hessian_bound_margin(const WeightedManifold& m, const Expr& f, double mdim, std::span<const double> p) {
  const int n = m.dim();
  if (!(mdim > n)) throw InvalidParameter("the Hessian bound needs m > n");
  const LocalGeometry geo(m, p, 1);
  const Jet fj = geo.chart_jet(f, 2);
  const double hess2 = geo.norm2(geo.hessian(fj)).value();
  const double lap = geo.drift_laplacian(fj).value();
  const double fh = geo.inner_gradients(fj, geo.weight()).value();
  return hess2 - (lap * lap / mdim - fh * fh / (mdim - n));
}

double hessian_bound_check(const WeightedManifold& m, const Expr& f, double mdim, std::span<const Point> points) {
  if (!(mdim > m.dim())) throw InvalidParameter("the Hessian bound needs m > n");
  double worst = std::numeric_limits<double>::infinity();
  for (const Point& p : points) worst = std::min(worst, hessian_bound_margin(m, f, mdim, p));
  return worst;
}

ReillyResult reilly_check(const WeightedManifold& m, const Mesh& mesh, const Expr& f, double mdim, int quadrature_order) {
  const int n = m.dim();
  if (!(mdim > n)) throw InvalidParameter("the Reilly inequality needs m > n");
  if (mesh.axisymmetric) throw InvalidParameter("the Reilly check integrates over the full chart mesh");
  const auto faces = boundary_faces(m.domain());
  if (faces.empty()) throw NoBoundary("the Reilly inequality needs a boundary");

  ReillyResult r;
  struct Terms {
    double lap2, transport, weight, ric;
  };
  auto terms = [&](const Point& x) {
    const LocalGeometry geo(m, std::span<const double>(x.data(), n), 2);
    const Jet fj = geo.chart_jet(f, 3);
    const Jet lap = geo.drift_laplacian(fj);
    const double grad2 = geo.gradient_norm2(fj).value();
    const double h2 = geo.gradient_norm2(geo.weight()).value();
    return Terms{lap.value() * lap.value(), geo.inner_gradients(fj, lap).value(), grad2 * h2,
                 geo.contract_gradients(geo.bakry_emery(), fj, fj).value()};
  };
  r.drift_laplacian_sq = integrate(mesh, m, [&](const Point& x) { return terms(x).lap2; }, quadrature_order) / mdim;
  r.gradient_transport = integrate(mesh, m, [&](const Point& x) { return terms(x).transport; }, quadrature_order);
  r.weight_correction = integrate(mesh, m, [&](const Point& x) { return terms(x).weight; }, quadrature_order) / (mdim - n);
  r.curvature = integrate(mesh, m, [&](const Point& x) { return terms(x).ric; }, quadrature_order);
  r.lhs = r.drift_laplacian_sq + r.gradient_transport - r.weight_correction + r.curvature;

  for (const Face& face : faces) {
    r.rhs += integrate_boundary(
        mesh, m, face,
        [&](const Point& x) {
          const double s = n == 2 ? x[1 - face.axis] : 0.0;
          const BoundaryPointData bd = boundary_geometry(m, face, s);
          const LocalGeometry geo(m, std::span<const double>(x.data(), n), 2);
          const Jet u = geo.gradient_norm2(geo.chart_jet(f, 3));
          double flux = 0.0;
          for (int k = 0; k < n; ++k) flux += u.d(k) * bd.eta[k];
          return 0.5 * flux;
        },
        quadrature_order);
  }
  r.margin = r.rhs - r.lhs;
  return r;
}

Mesh build_level_mesh(const WeightedManifold& m, const MeshSpec& spec, int level) {
  const int scale = 1 << level;
  if (spec.axisymmetric) return build_axisymmetric_mesh(m, spec.cells.at(0) * scale);
  std::vector<int> cells;
  for (int a = 0; a < m.dim(); ++a) cells.push_back(spec.cells.at(a) * scale);
  return build_mesh(m, cells);
}

SpectralResult first_eigenvalue(const WeightedManifold& m, const MeshSpec& spec, BoundaryCondition bc) {
  if (spec.levels < 2) throw InvalidParameter("a spectral ladder needs at least 2 levels");
  SpectralResult out;
  out.bc = bc;
  std::vector<double> values;
  for (int level = 0; level < spec.levels; ++level) {
    const Mesh mesh = build_level_mesh(m, spec, level);
    const int modes = spec.axisymmetric ? spec.max_fourier_mode : 0;
    LevelResult lr;
    for (int k = 0; k <= modes; ++k) {
      AssemblyOptions ao;
      ao.quadrature_order = spec.quadrature_order;
      ao.fourier_mode = k;
      const AssembledProblem p = apply_bc(assemble(m, mesh, ao), bc, mesh);
      if (k == 0) out.constant_deflated = p.deflate_constant;
      const EigenResult er = smallest_eigenpairs(p, spec.eigen);
      if (k == 0 || er.eigenvalues[0] < lr.lambda1) {
        lr.lambda1 = er.eigenvalues[0];
        lr.residual = er.residuals[0];
        lr.fourier_mode = k;
        lr.method = er.method;
        lr.dofs = p.size();
      }
    }
    lr.cells = mesh.cells;
    values.push_back(lr.lambda1);
    out.levels.push_back(lr);
  }
  const Extrapolation e = richardson(values);
  out.extrapolate = e.extrapolate;
  out.error_estimate = e.error_estimate;
  out.observed_order = e.observed_order;
  return out;
}

double conclusion_tolerance(const SpectralResult& s) { return std::max(10.0 * s.error_estimate, 1e-8); }

HypothesisCheck boundary_hypothesis(const WeightedManifold& m, BoundaryCondition bc, bool weighted,
                                    const VerifyOptions& opts) {
  const auto samples = boundary_samples(m.domain(), opts.plan);
  if (samples.empty()) throw NoBoundary("the theorem needs a non-empty boundary");
  MarginStats st;
  for (const BoundarySample& b : samples) {
    const BoundaryPointData bd = boundary_geometry(m, b.face, b.s);
    double v = 0.0;
    if (bc == BoundaryCondition::Neumann) {
      v = bd.second_fundamental_form;
    } else {
      v = weighted ? bd.weighted_mean_curvature : bd.mean_curvature;
    }
    st.add(v, bd.point);
  }
  st.finish();
  const char* name = bc == BoundaryCondition::Neumann ? "boundary_convex"
                     : weighted                       ? "boundary_weighted_mean_curvature"
                                                      : "boundary_mean_curvature";
  HypothesisCheck chk = make_check(name, st.min, opts.hypothesis_tol, false, opts.plan.describe() + ", boundary");
  chk.argmin = st.argmin;
  if (bc == BoundaryCondition::Neumann && m.dim() == 1) chk.note = "point boundary; second fundamental form vanishes";
  return chk;
}

namespace {

BoundValue judge(std::string label, double bound, const SpectralResult& s, double tol, bool strict, bool hypotheses_ok) {
  BoundValue b;
  b.label = std::move(label);
  b.value = bound;
  b.margin = s.extrapolate - bound;
  for (const LevelResult& l : s.levels) b.level_margins.push_back(l.lambda1 - bound);
  if (!hypotheses_ok) {
    b.verdict = Verdict::HypothesesNotMet;
  } else {
    const bool holds = strict ? b.margin > -tol : b.margin >= -tol;
    b.verdict = holds ? Verdict::Confirmed : Verdict::Violated;
  }
  return b;
}

bool all_pass(const std::vector<HypothesisCheck>& hs) {
  return std::all_of(hs.begin(), hs.end(), [](const HypothesisCheck& h) { return h.pass; });
}

}  // namespace

TheoremReport thm1_verify(const WeightedManifold& m, const MeshSpec& spec, double c, BoundaryCondition bc,
                          const VerifyOptions& opts) {
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  if (bc == BoundaryCondition::None) throw InvalidParameter("choose a Dirichlet or Neumann problem");
  TheoremReport rep;
  rep.name = "thm1";
  const MarginStats scan = ric_h_margin_scan(m, opts.plan, c);
  const std::string desc = opts.plan.describe();
  rep.hypotheses.push_back(make_check("ric_h_positive", scan.min_lambda_ric_h, opts.hypothesis_tol, true, desc));
  HypothesisCheck rho = make_check("ric_h_exceeds_c_grad_h", scan.min, opts.hypothesis_tol, true, desc);
  rho.argmin = scan.argmin;
  rep.hypotheses.push_back(rho);
  rep.hypotheses.push_back(boundary_hypothesis(m, bc, true, opts));

  rep.spectrum = first_eigenvalue(m, spec, bc);
  rep.conclusion_tolerance = conclusion_tolerance(*rep.spectrum);
  const bool ok = all_pass(rep.hypotheses);
  rep.bounds.push_back(judge("inf_rho_c", scan.min, *rep.spectrum, rep.conclusion_tolerance, true, ok));
  rep.verdict = rep.bounds.back().verdict;
  return rep;
}

TheoremReport madu_verify(const WeightedManifold& m, const MeshSpec& spec, double mdim, double a, BoundaryCondition bc,
                          const VerifyOptions& opts) {
  const int n = m.dim();
  if (!(mdim > n)) throw InvalidParameter("m must exceed the dimension");
  if (!(a > 0.0)) throw InvalidParameter("a must be positive");
  if (bc == BoundaryCondition::None) throw InvalidParameter("choose a Dirichlet or Neumann problem");
  TheoremReport rep;
  rep.name = "madu";
  MarginStats st;
  for (const Point& p : sample_points(m.domain(), opts.plan)) {
    const CurvatureData cd = curvature_at(m, std::span<const double>(p.data(), n));
    st.add(cd.lambda_min_ric_h - cd.grad_h_norm2 / (mdim - n) - a, p);
  }
  st.finish();
  HypothesisCheck h = make_check("ric_h_lower_bound", st.min, opts.hypothesis_tol, false, opts.plan.describe());
  h.argmin = st.argmin;
  rep.hypotheses.push_back(h);
  rep.hypotheses.push_back(boundary_hypothesis(m, bc, true, opts));

  rep.spectrum = first_eigenvalue(m, spec, bc);
  rep.conclusion_tolerance = conclusion_tolerance(*rep.spectrum);
  const bool ok = all_pass(rep.hypotheses);
  rep.bounds.push_back(judge("as_printed", mdim * a / (mdim - n), *rep.spectrum, rep.conclusion_tolerance, false, ok));
  rep.bounds.push_back(judge("derived_form", mdim * a / (mdim - 1.0), *rep.spectrum, rep.conclusion_tolerance, false, ok));
  rep.verdict = rep.bounds[0].verdict;
  rep.discrepancy = rep.bounds[0].verdict != rep.bounds[1].verdict;
  rep.note = "derived_form m*a/(m-1) is a re-derivation from the proof chain, not a printed result";
  return rep;
}

TheoremReport corollary_verify(const WeightedManifold& m, const MeshSpec& spec, BoundaryCondition bc,
                               const VerifyOptions& opts) {
  if (!m.fields().weight_is_constant()) throw NonConstantWeight("the corollary needs a constant weight");
  if (bc == BoundaryCondition::None) throw InvalidParameter("choose a Dirichlet or Neumann problem");
  TheoremReport rep;
  rep.name = "corollary";
  const MarginStats scan = ric_h_margin_scan(m, opts.plan, 0.0);
  HypothesisCheck h = make_check("ric_positive", scan.min_lambda_ric_h, opts.hypothesis_tol, true, opts.plan.describe());
  h.argmin = scan.argmin;
  rep.hypotheses.push_back(h);
  rep.hypotheses.push_back(boundary_hypothesis(m, bc, false, opts));

  rep.spectrum = first_eigenvalue(m, spec, bc);
  rep.conclusion_tolerance = conclusion_tolerance(*rep.spectrum);
  const bool ok = all_pass(rep.hypotheses);
  rep.bounds.push_back(judge("inf_ric", scan.min_lambda_ric_h, *rep.spectrum, rep.conclusion_tolerance, true, ok));
  rep.verdict = rep.bounds.back().verdict;
  return rep;
}

}  // namespace bakry
