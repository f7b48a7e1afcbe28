#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bakry/checks.hpp"
#include "bakry/discretize.hpp"
#include "bakry/eigensolve.hpp"
#include "bakry/geometry.hpp"

namespace bakry {

enum class Verdict { Confirmed, Violated, HypothesesNotMet };

std::string to_string(Verdict v);
std::string to_string(BoundaryCondition bc);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// 1/2 Delta_h |grad f|^2 against |Hess f|^2 + <grad f, grad Delta_h f> + Ric_h(grad f, grad f).
IdentitySides bochner_at(const WeightedManifold& m, const Expr& f, std::span<const double> p);
/// Max residual over the points.
double bochner_residual(const WeightedManifold& m, const Expr& f, std::span<const Point> points);

/// |Hess f|^2 - [(Delta_h f)^2 / m - <grad f, grad h>^2 / (m - n)] at p.
double hessian_bound_margin(const WeightedManifold& m, const Expr& f, double mdim, std::span<const double> p);
/// Min margin over the points. Throws InvalidParameter unless m > n.
double hessian_bound_check(const WeightedManifold& m, const Expr& f, double mdim, std::span<const Point> points);

struct ReillyResult {
  double drift_laplacian_sq = 0.0;    // 1/m int (Delta_h f)^2
  double gradient_transport = 0.0;    // int <grad f, grad Delta_h f>
  double weight_correction = 0.0;     // 1/(m-n) int |grad f|^2 |grad h|^2
  double curvature = 0.0;             // int Ric_h(grad f, grad f)
  double lhs = 0.0;
  double rhs = 0.0;                   // 1/2 int_boundary <grad |grad f|^2, eta> da_h
  double margin = 0.0;                // rhs - lhs
};

/// Integrated Reilly-type inequality by weighted quadrature with exact
/// integrands. Throws NoBoundary, InvalidParameter (m <= n).
ReillyResult reilly_check(const WeightedManifold& m, const Mesh& mesh, const Expr& f, double mdim,
                          int quadrature_order = 6);

/// Nested meshes for a spectral computation: level i uses cells * 2^i.
struct MeshSpec {
  std::vector<int> cells{16, 16};
  int levels = 3;
  /// 1D mesh along x1 for fields independent of the periodic x2.
  bool axisymmetric = false;
  int max_fourier_mode = 0;
  int quadrature_order = 4;
  EigenOptions eigen;
};

struct LevelResult {
  std::vector<int> cells;
  int dofs = 0;
  double lambda1 = 0.0;
  double residual = 0.0;
  int fourier_mode = 0;
  EigenMethod method = EigenMethod::Dense;
};

struct SpectralResult {
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  std::vector<LevelResult> levels;
  double extrapolate = 0.0;
  double error_estimate = 0.0;
  double observed_order = 0.0;
  /// Neumann: the constant mode was excluded.
  bool constant_deflated = false;
};

Mesh build_level_mesh(const WeightedManifold& m, const MeshSpec& spec, int level);

/// lambda_1 on every level (minimum over Fourier modes on axisymmetric meshes)
/// and the Richardson extrapolate of the last three.
SpectralResult first_eigenvalue(const WeightedManifold& m, const MeshSpec& spec, BoundaryCondition bc);

struct BoundValue {
  std::string label;
  double value = 0.0;
  Verdict verdict = Verdict::HypothesesNotMet;
  /// lambda1 - bound on the extrapolate and on every level.
  double margin = 0.0;
  std::vector<double> level_margins;
};

struct TheoremReport {
  std::string name;
  Verdict verdict = Verdict::HypothesesNotMet;
  std::vector<HypothesisCheck> hypotheses;
  std::optional<SpectralResult> spectrum;
  std::vector<BoundValue> bounds;
  double conclusion_tolerance = 0.0;
  /// Set when bound forms disagree in verdict.
  bool discrepancy = false;
  std::string note;
};

struct VerifyOptions {
  SamplePlan plan;
  double hypothesis_tol = 1e-9;
};

/// Conclusion tolerance: max(10 * extrapolation error, 1e-8).
double conclusion_tolerance(const SpectralResult& s);

/// lambda_1 > inf (lambda_min Ric_h - c |grad h|^2) under Ric_h > 0,
/// Ric_h > c |grad h|^2 and the boundary condition (H_h >= 0 for Dirichlet,
/// convex boundary for Neumann). Throws InvalidParameter unless c > 0.
TheoremReport thm1_verify(const WeightedManifold& m, const MeshSpec& spec, double c, BoundaryCondition bc,
                          const VerifyOptions& opts = {});

/// Ric_h >= |grad h|^2/(m-n) + a. Reports the printed bound m a/(m-n) and the
/// re-derived m a/(m-1), each with its own verdict; the printed one decides
/// the report verdict. Throws InvalidParameter unless m > n and a > 0.
TheoremReport madu_verify(const WeightedManifold& m, const MeshSpec& spec, double mdim, double a, BoundaryCondition bc,
                          const VerifyOptions& opts = {});

/// Constant weight: lambda_1 > inf lambda_min(Ric). Throws NonConstantWeight.
TheoremReport corollary_verify(const WeightedManifold& m, const MeshSpec& spec, BoundaryCondition bc,
                               const VerifyOptions& opts = {});

/// Boundary hypothesis: weighted mean curvature (Dirichlet) or second
/// fundamental form (Neumann) of the boundary, minimised over boundary samples.
HypothesisCheck boundary_hypothesis(const WeightedManifold& m, BoundaryCondition bc, bool weighted,
                                    const VerifyOptions& opts);

}  // namespace bakry
