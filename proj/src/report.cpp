#include "bakry/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace bakry {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json point_json(const Point& p, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(num(p[i]));
  return a;
}

json hypothesis_json(const HypothesisCheck& h, int dim) {
  json j;
  j["name"] = h.name;
  j["margin"] = num(h.margin);
  j["pass"] = h.pass;
  j["strict"] = h.strict;
  j["tolerance"] = h.tolerance;
  j["plan"] = h.plan;
  j["argmin"] = point_json(h.argmin, dim);
  if (!h.note.empty()) j["note"] = h.note;
  return j;
}

json spectrum_json(const SpectralResult& s, double conclusion_tol) {
  json levels = json::array();
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const LevelResult& l = s.levels[i];
    levels.push_back({{"level", i},
                      {"cells", l.cells},
                      {"dofs", l.dofs},
                      {"lambda1", num(l.lambda1)},
                      {"residual", num(l.residual)},
                      {"fourier_mode", l.fourier_mode},
                      {"method", to_string(l.method)}});
  }
  json j;
  j["bc"] = to_string(s.bc);
  j["lambda1"] = num(s.levels.back().lambda1);
  j["levels"] = levels;
  j["extrapolate"] = num(s.extrapolate);
  j["error_estimate"] = num(s.error_estimate);
  j["observed_order"] = num(s.observed_order);
  j["conclusion_tolerance"] = num(conclusion_tol);
  j["constant_deflated"] = s.constant_deflated;
  return j;
}

json bound_json(const BoundValue& b) {
  json margins = json::array();
  for (double m : b.level_margins) margins.push_back(num(m));
  return {{"label", b.label},
          {"value", num(b.value)},
          {"verdict", to_string(b.verdict)},
          {"margin", num(b.margin)},
          {"level_margins", margins}};
}

json theorem_json(const TheoremReport& r, int dim) {
  json j;
  j["verdict"] = to_string(r.verdict);
  json hyps = json::array();
  for (const auto& h : r.hypotheses) hyps.push_back(hypothesis_json(h, dim));
  j["hypotheses"] = hyps;
  j["computed"] = r.spectrum ? spectrum_json(*r.spectrum, r.conclusion_tolerance) : json(nullptr);
  json bounds;
  bounds["as_printed"] = r.bounds.empty() ? json(nullptr) : bound_json(r.bounds[0]);
  bounds["derived_form"] = r.bounds.size() > 1 ? bound_json(r.bounds[1]) : json(nullptr);
  j["bounds"] = bounds;
  j["discrepancy"] = r.discrepancy;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json no_bounds() { return {{"as_printed", nullptr}, {"derived_form", nullptr}}; }

json base_entry(const std::string& verdict) {
  json j;
  j["verdict"] = verdict;
  j["hypotheses"] = json::array();
  j["computed"] = json::object();
  j["bounds"] = no_bounds();
  j["discrepancy"] = false;
  return j;
}

MeshSpec mesh_spec(const Scenario& sc, const RunOptions& opts) {
  MeshSpec spec = sc.mesh;
  if (opts.levels) spec.levels = *opts.levels;
  return spec;
}

VerifyOptions verify_options(const Scenario& sc) { return {sc.plan, sc.tolerances.hypothesis}; }

json run_bochner(const Scenario& sc, const CheckSpec& ck) {
  const WeightedManifold& m = *sc.manifold;
  const auto pts = sample_points(m.domain(), sc.plan);
  double worst = 0.0;
  json fs = json::array();
  for (const Expr& f : ck.functions) {
    const double r = bochner_residual(m, f, pts);
    worst = std::max(worst, r);
    fs.push_back({{"f", f.to_string()}, {"max_residual", num(r)}});
  }
  json j = base_entry(worst <= sc.tolerances.bochner ? "confirmed" : "violated");
  j["computed"] = {{"functions", fs},
                   {"max_residual", num(worst)},
                   {"tolerance", sc.tolerances.bochner},
                   {"points", pts.size()}};
  return j;
}

json run_hessian_bound(const Scenario& sc, const CheckSpec& ck) {
  const WeightedManifold& m = *sc.manifold;
  const auto pts = sample_points(m.domain(), sc.plan);
  double worst = std::numeric_limits<double>::infinity();
  json fs = json::array();
  for (const Expr& f : ck.functions) {
    const double margin = hessian_bound_check(m, f, ck.m, pts);
    worst = std::min(worst, margin);
    fs.push_back({{"f", f.to_string()}, {"min_margin", num(margin)}});
  }
  json j = base_entry(worst >= -sc.tolerances.hessian_bound ? "confirmed" : "violated");
  j["computed"] = {{"m", ck.m},
                   {"functions", fs},
                   {"min_margin", num(worst)},
                   {"tolerance", sc.tolerances.hessian_bound},
                   {"points", pts.size()}};
  return j;
}

json run_reilly(const Scenario& sc, const CheckSpec& ck) {
  const WeightedManifold& m = *sc.manifold;
  const Mesh mesh = build_mesh(m, ck.cells);
  constexpr int kOrder = 6;
  double worst = std::numeric_limits<double>::infinity();
  json fs = json::array();
  for (const Expr& f : ck.functions) {
    const ReillyResult r = reilly_check(m, mesh, f, ck.m, kOrder);
    worst = std::min(worst, r.margin);
    fs.push_back({{"f", f.to_string()},
                  {"drift_laplacian_sq", num(r.drift_laplacian_sq)},
                  {"gradient_transport", num(r.gradient_transport)},
                  {"weight_correction", num(r.weight_correction)},
                  {"curvature", num(r.curvature)},
                  {"lhs", num(r.lhs)},
                  {"rhs", num(r.rhs)},
                  {"margin", num(r.margin)}});
  }
  json j = base_entry(worst >= -sc.tolerances.reilly ? "confirmed" : "violated");
  j["computed"] = {{"m", ck.m},
                   {"cells", ck.cells},
                   {"quadrature_order", kOrder},
                   {"functions", fs},
                   {"min_margin", num(worst)},
                   {"tolerance", sc.tolerances.reilly}};
  return j;
}

HypothesisCheck h_minimal_hypothesis(const Scenario& sc, double* residual, Point* where) {
  const MarginStats st = h_minimality_residual(*sc.immersion, sc.plan);
  if (residual) *residual = st.max;
  if (where) *where = st.argmax;
  HypothesisCheck h = make_check("h_minimal", -st.max, sc.tolerances.h_minimality, false, sc.plan.describe());
  h.argmin = st.argmax;
  h.note = "margin is minus the max of |H - <grad hbar, nu>|";
  return h;
}

json run_h_minimality(const Scenario& sc, const CheckSpec& ck) {
  double residual = 0.0;
  Point where{};
  h_minimal_hypothesis(sc, &residual, &where);
  const bool ok = residual <= sc.tolerances.h_minimality;
  json j = base_entry(ok ? "confirmed" : "hypotheses-not-met");
  const Expr f = ck.functions.empty() ? Expr::number(1.0) : ck.functions.front();
  json survey = json::array();
  for (const ConventionEntry& e : convention_survey(*sc.immersion, f, sc.plan))
    survey.push_back({{"shape_sign", e.shape_sign},
                      {"weight_sign", e.weight_sign},
                      {"h_minimality_residual", num(e.h_minimality)},
                      {"identity_residual", num(e.identity)}});
  j["computed"] = {{"residual", num(residual)},
                   {"tolerance", sc.tolerances.h_minimality},
                   {"argmax", point_json(where, 2)},
                   {"survey_function", f.to_string()},
                   {"convention_survey", survey}};
  if (!ok) j["note"] = "the surface is not h-minimal for this weight and convention";
  return j;
}

json run_prop25(const Scenario& sc, const CheckSpec& ck) {
  json j = base_entry("confirmed");
  const HypothesisCheck hmin = h_minimal_hypothesis(sc, nullptr, nullptr);
  j["hypotheses"].push_back(hypothesis_json(hmin, 2));
  const auto pts = sample_points(sc.immersion->domain, sc.plan);
  double worst = 0.0;
  json fs = json::array();
  for (const Expr& f : ck.functions) {
    double r = 0.0;
    for (const Point& p : pts)
      r = std::max(r, mean_curvature_identity(*sc.immersion, f, std::span<const double>(p.data(), 2)).residual);
    worst = std::max(worst, r);
    fs.push_back({{"f", f.to_string()}, {"max_residual", num(r)}});
  }
  // f = 1: L_h H against H.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const Expr one = Expr::number(1.0);
  for (const Point& p : pts) {
    const IdentityResidual r = mean_curvature_identity(*sc.immersion, one, std::span<const double>(p.data(), 2));
    const double h = shape_at(*sc.immersion, std::span<const double>(p.data(), 2)).mean_curvature;
    if (std::abs(h) < 1e-12) continue;
    lo = std::min(lo, r.lhs / h);
    hi = std::max(hi, r.lhs / h);
  }
  j["computed"] = {{"functions", fs},
                   {"max_residual", num(worst)},
                   {"tolerance", sc.tolerances.identity},
                   {"points", pts.size()},
                   {"lh_of_h_over_h", {{"min", num(lo)}, {"max", num(hi)}}}};
  if (!hmin.pass) j["verdict"] = "hypotheses-not-met";
  else if (worst > sc.tolerances.identity) j["verdict"] = "violated";
  return j;
}

json run_splitting(const Scenario& sc, const CheckSpec& ck) {
  const auto pts = sample_points(sc.immersion->domain, sc.plan);
  double worst = 0.0;
  json fs = json::array();
  for (const Expr& f : ck.functions) {
    double plain = 0.0, drift = 0.0;
    for (const Point& p : pts) {
      const SplittingResidual r = splitting_residual(*sc.immersion, f, std::span<const double>(p.data(), 2));
      plain = std::max(plain, r.plain);
      drift = std::max(drift, r.drift);
    }
    worst = std::max({worst, plain, drift});
    fs.push_back({{"f", f.to_string()}, {"plain_residual", num(plain)}, {"drift_residual", num(drift)}});
  }
  json j = base_entry(worst <= sc.tolerances.splitting ? "confirmed" : "violated");
  j["computed"] = {{"functions", fs},
                   {"max_residual", num(worst)},
                   {"tolerance", sc.tolerances.splitting},
                   {"points", pts.size()}};
  return j;
}

struct StabilityLadder {
  json computed;
  bool routes_agree = true;
  bool stable = false;
};

StabilityLadder stability_ladder(const Scenario& sc, const RunOptions& opts) {
  const MeshSpec spec = mesh_spec(sc, opts);
  const WeightedManifold m = sc.space();
  StabilityOptions so;
  so.quadrature_order = spec.quadrature_order;
  so.max_fourier_mode = spec.axisymmetric ? spec.max_fourier_mode : 0;
  so.tol = spec.eigen.tol;
  so.eigen = spec.eigen;
  const double rel = sc.tolerances.quadratic_form;
  auto agree = [&](double x, double y) { return std::abs(x - y) <= rel * std::max(1.0, std::max(std::abs(x), std::abs(y))); };

  StabilityLadder out;
  std::vector<double> values;
  json levels = json::array();
  StabilityResult last;
  for (int level = 0; level < spec.levels; ++level) {
    const Mesh mesh = build_level_mesh(m, spec, level);
    last = stability_verdict(*sc.immersion, mesh, so);
    values.push_back(last.mu1);
    bool ok = agree(last.q_check_matrix, last.q_check_direct);
    if (last.closed) ok = ok && agree(last.q_one_matrix, last.q_one_direct);
    out.routes_agree = out.routes_agree && ok;
    json modes = json::array();
    for (double v : last.mode_minima) modes.push_back(num(v));
    json lj = {{"level", level},
               {"cells", mesh.cells},
               {"dofs", last.dofs},
               {"mu1", num(last.mu1)},
               {"fourier_mode", last.fourier_mode},
               {"mode_minima", modes},
               {"residual", num(last.eigen.residuals.empty() ? kNaN : last.eigen.residuals[0])},
               {"q_eigenvector_matrix", num(last.q_check_matrix)},
               {"q_eigenvector_direct", num(last.q_check_direct)}};
    if (last.closed) {
      lj["q_one_matrix"] = num(last.q_one_matrix);
      lj["q_one_direct"] = num(last.q_one_direct);
    }
    levels.push_back(lj);
  }
  const Extrapolation e = richardson(values);
  const double tol = std::max(10.0 * e.error_estimate, 1e-8);
  out.stable = e.extrapolate >= -tol;
  out.computed = {{"lambda1", num(values.back())},
                  {"levels", levels},
                  {"extrapolate", num(e.extrapolate)},
                  {"error_estimate", num(e.error_estimate)},
                  {"observed_order", num(e.observed_order)},
                  {"conclusion_tolerance", num(tol)},
                  {"closed", last.closed},
                  {"routes_agree", out.routes_agree},
                  {"route_tolerance", rel},
                  {"outcome", out.stable ? "stable" : "unstable"}};
  if (last.closed) out.computed["q_one_negative"] = last.q_one_matrix < 0.0;
  return out;
}

json run_stability(const Scenario& sc, const RunOptions& opts) {
  const StabilityLadder s = stability_ladder(sc, opts);
  json j = base_entry(s.routes_agree ? "confirmed" : "violated");
  j["computed"] = s.computed;
  j["note"] = "lambda1 is mu1, the bottom of the stability form Q; the verdict checks that Q by assembled "
              "matrices and by direct quadrature agree, the outcome reports stability";
  return j;
}

json run_thm2(const Scenario& sc, const CheckSpec& ck, const RunOptions& opts) {
  const Thm2Report rep = thm2_check(*sc.immersion, ck.c, sc.plan, sc.tolerances.hypothesis);
  json j = base_entry("hypotheses-not-met");
  for (const auto& h : rep.hypotheses) j["hypotheses"].push_back(hypothesis_json(h, 2));
  json computed = {{"c", ck.c},
                   {"condition",
                    {{"min", num(rep.condition.min)},
                     {"max", num(rep.condition.max)},
                     {"mean", num(rep.condition.mean)},
                     {"argmin", point_json(rep.condition.argmin, 2)}}}};
  if (rep.all_pass) {
    const StabilityLadder s = stability_ladder(sc, opts);
    computed["stability"] = s.computed;
    j["verdict"] = s.stable ? "confirmed" : "violated";
  }
  j["computed"] = computed;
  return j;
}

json run_check(const Scenario& sc, const CheckSpec& ck, const RunOptions& opts) {
  const int dim = sc.space().dim();
  if (ck.name == "thm1") return theorem_json(thm1_verify(*sc.manifold, mesh_spec(sc, opts), ck.c, ck.bc, verify_options(sc)), dim);
  if (ck.name == "madu")
    return theorem_json(madu_verify(*sc.manifold, mesh_spec(sc, opts), ck.m, ck.a, ck.bc, verify_options(sc)), dim);
  if (ck.name == "corollary")
    return theorem_json(corollary_verify(*sc.manifold, mesh_spec(sc, opts), ck.bc, verify_options(sc)), dim);
  if (ck.name == "bochner") return run_bochner(sc, ck);
  if (ck.name == "hessian_bound") return run_hessian_bound(sc, ck);
  if (ck.name == "reilly") return run_reilly(sc, ck);
  if (ck.name == "h_minimality") return run_h_minimality(sc, ck);
  if (ck.name == "stability") return run_stability(sc, opts);
  if (ck.name == "prop25") return run_prop25(sc, ck);
  if (ck.name == "splitting") return run_splitting(sc, ck);
  if (ck.name == "thm2") return run_thm2(sc, ck, opts);
  throw InvalidParameter("unknown check " + ck.name);
}

json conventions(const Scenario& sc) {
  json j;
  if (sc.immersion) {
    j["shape_sign"] = sc.immersion->shape_sign;
    j["orientation"] = sc.immersion->orientation == Orientation::Plus ? "plus" : "minus";
  } else {
    j["shape_sign"] = nullptr;
    j["orientation"] = nullptr;
  }
  j["mean_curvature"] = "H = trace of a, a_ij = -shape_sign <nu, d_i d_j F>, nu = orientation * d1F x d2F / |d1F x d2F|";
  j["drift_laplacian"] = "Delta_h = Delta - <grad h, grad .>, weight e^{-h}";
  j["neumann_indexing"] = "lambda1 is the first nonzero Neumann eigenvalue; constants are deflated";
  return j;
}

}  // namespace

json run_report(const Scenario& sc, const RunOptions& opts) {
  json report;
  report["scenario_id"] = sc.id;
  report["description"] = sc.description;
  report["conventions"] = conventions(sc);
  report["sampling"] = sc.plan.describe();
  report["tolerances"] = {{"hypothesis", sc.tolerances.hypothesis},
                          {"bochner", sc.tolerances.bochner},
                          {"hessian_bound", sc.tolerances.hessian_bound},
                          {"reilly", sc.tolerances.reilly},
                          {"identity", sc.tolerances.identity},
                          {"h_minimality", sc.tolerances.h_minimality},
                          {"splitting", sc.tolerances.splitting},
                          {"quadratic_form", sc.tolerances.quadratic_form},
                          {"eigen", sc.mesh.eigen.tol}};
  json checks = json::array();
  for (const CheckSpec& ck : sc.checks) {
    const auto start = std::chrono::steady_clock::now();
    json entry;
    try {
      entry = run_check(sc, ck, opts);
    } catch (const Error& e) {
      entry = base_entry("hypotheses-not-met");
      entry["computed"] = nullptr;
      entry["error"] = e.what();
    }
    json named;
    named["name"] = ck.name;
    for (auto it = entry.begin(); it != entry.end(); ++it) named[it.key()] = it.value();
    if (opts.timing) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      named["runtime_ms"] = ms;
    }
    checks.push_back(named);
  }
  report["checks"] = checks;
  return report;
}

int exit_code(const json& report) {
  for (const auto& c : report.at("checks"))
    if (c.at("verdict") == "violated") return 2;
  return 0;
}

BoundaryCondition default_bc(const Scenario& sc) {
  for (const CheckSpec& ck : sc.checks)
    if (ck.bc != BoundaryCondition::None) return ck.bc;
  return boundary_faces(sc.space().domain()).empty() ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
}

std::vector<ConvergenceRow> convergence_table(const Scenario& sc, BoundaryCondition bc, int levels) {
  if (levels < 3) throw InvalidParameter("a convergence study needs at least 3 levels");
  MeshSpec spec = sc.mesh;
  spec.levels = levels;
  const SpectralResult s = first_eigenvalue(sc.space(), spec, bc);
  std::vector<ConvergenceRow> rows;
  std::vector<double> values;
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    values.push_back(s.levels[i].lambda1);
    ConvergenceRow r;
    r.level = static_cast<int>(i);
    r.dofs = s.levels[i].dofs;
    r.lambda1 = s.levels[i].lambda1;
    r.order_estimate = i >= 2 ? observed_order(values[i - 2], values[i - 1], values[i]) : kNaN;
    r.extrapolate = i >= 1 ? richardson(values).extrapolate : kNaN;
    rows.push_back(r);
  }
  return rows;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "level,dofs,lambda1,order_estimate,extrapolate\n";
  for (const auto& r : rows)
    os << r.level << ',' << r.dofs << ',' << format_double(r.lambda1) << ',' << format_double(r.order_estimate) << ','
       << format_double(r.extrapolate) << '\n';
  return os.str();
}

std::vector<SpectrumRow> spectrum(const Scenario& sc, BoundaryCondition bc, int k, int level) {
  if (k < 1) throw InvalidParameter("k must be positive");
  if (level < 0) throw InvalidParameter("level must be non-negative");
  const WeightedManifold m = sc.space();
  const Mesh mesh = build_level_mesh(m, sc.mesh, level);
  const int modes = sc.mesh.axisymmetric ? sc.mesh.max_fourier_mode : 0;
  std::vector<SpectrumRow> all;
  for (int mode = 0; mode <= modes; ++mode) {
    AssemblyOptions ao;
    ao.quadrature_order = sc.mesh.quadrature_order;
    ao.fourier_mode = mode;
    const AssembledProblem p = apply_bc(assemble(m, mesh, ao), bc, mesh);
    EigenOptions eo = sc.mesh.eigen;
    eo.count = std::min(k, p.size() - (p.deflate_constant ? 1 : 0));
    if (eo.count < 1) continue;
    const EigenResult er = smallest_eigenpairs(p, eo);
    for (std::size_t i = 0; i < er.eigenvalues.size(); ++i)
      all.push_back({0, er.eigenvalues[i], mode, mode == 0 ? 1 : 2, er.residuals[i]});
  }
  std::stable_sort(all.begin(), all.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.fourier_mode < b.fourier_mode;
  });
  std::vector<SpectrumRow> out;
  int counted = 0;
  for (SpectrumRow r : all) {
    if (counted >= k) break;
    r.index = static_cast<int>(out.size()) + 1;
    counted += r.multiplicity;
    out.push_back(r);
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream os;
  os << "index,lambda,fourier_mode,multiplicity,residual\n";
  for (const auto& r : rows)
    os << r.index << ',' << format_double(r.lambda) << ',' << r.fourier_mode << ',' << r.multiplicity << ','
       << format_double(r.residual) << '\n';
  return os.str();
}

}  // namespace bakry
