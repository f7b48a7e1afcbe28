#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "bakry/checks.hpp"
#include "bakry/discretize.hpp"
#include "bakry/eigensolve.hpp"
#include "bakry/geometry.hpp"

namespace bakry {

enum class Orientation { Plus, Minus };

/// A surface F: chart box -> R^3 in flat space with density e^{-hbar}.
///
/// The unit normal is nu = +-(d1F x d2F)/|d1F x d2F| according to
/// `orientation`. The shape operator is A X = s * Dbar_X nu with s =
/// `shape_sign`, so a_ij = -s <nu, d_i d_j F> and H = tr_g a. With s = +1 and
/// the outward normal a round sphere of radius R has H = 2/R.
struct Immersion {
  Domain domain;
  std::array<Expr, 3> map;  // chart expressions (2 variables)
  Expr ambient_weight;      // expression in x1, x2, x3 of R^3
  Orientation orientation = Orientation::Plus;
  int shape_sign = +1;

  /// Same surface with the ambient weight multiplied by sign (+1 or -1).
  Immersion with_weight_sign(int sign) const;
  /// Same surface with the opposite normal.
  Immersion flipped() const;
};

/// Metric and weight induced on the chart by an immersion.
class PullbackFields final : public FieldSource {
 public:
  explicit PullbackFields(Immersion imm) : imm_(std::move(imm)) {}
  int dim() const override { return 2; }
  JetMatrix metric(std::span<const double> p, int order) const override;
  Jet weight(std::span<const double> p, int order) const override;
  void metric_values(std::span<const double> p, double g[2][2]) const override;
  double weight_value(std::span<const double> p) const override;
  bool weight_is_constant() const override { return imm_.ambient_weight.is_constant(); }
  std::string describe() const override;

 private:
  Immersion imm_;
};

/// The induced weighted surface (M, F*gbar, e^{-hbar o F} dv).
WeightedManifold induced_manifold(const Immersion& imm);

/// Extrinsic geometry at one chart point, carried as chart jets.
///
/// `order` is the jet order of F (2..4). Tangents and the normal have order-1,
/// a_ij, H and |A|^2 have order-2. The ambient weight is carried up to third
/// derivatives at F(p).
class LocalSurface {
 public:
  LocalSurface(const Immersion& imm, std::span<const double> p, int order);

  int order() const { return order_; }
  const Jet& position(int a) const { return F_[a]; }
  const Jet& tangent(int i, int a) const { return dF_[i][a]; }
  const Jet& normal(int a) const { return nu_[a]; }
  const Jet& g(int i, int j) const { return g_[i][j]; }
  const Jet& g_inv(int i, int j) const { return ginv_[i][j]; }
  const Jet& a(int i, int j) const { return a_[i][j]; }
  const Jet& mean_curvature() const { return H_; }
  const Jet& norm2_A() const { return A2_; }
  /// hbar o F as a chart jet (the intrinsic weight).
  const Jet& weight() const { return h_; }
  /// (d_a hbar) o F, order-1.
  const Jet& ambient_gradient(int a) const { return grad_hbar_[a]; }
  /// <Dbar hbar, nu>, order-2.
  const Jet& normal_derivative() const { return h_nu_; }
  /// Hbar(nu, nu) with the ambient Hessian, order-2.
  const Jet& hess_nu_nu() const { return hess_nu_nu_; }
  /// Values at F(p).
  double ambient_hessian(int a, int b) const { return hess_[a][b]; }
  double ambient_third(int a, int b, int c) const { return third_[a][b][c]; }

 private:
  int order_;
  std::array<Jet, 3> F_;
  std::array<std::array<Jet, 3>, 2> dF_;
  std::array<Jet, 3> nu_;
  JetMatrix g_, ginv_, a_;
  Jet H_, A2_, h_, h_nu_, hess_nu_nu_;
  std::array<Jet, 3> grad_hbar_;
  std::array<std::array<double, 3>, 3> hess_{};
  std::array<std::array<std::array<double, 3>, 3>, 3> third_{};
};

struct ShapePointData {
  Point point{};
  std::array<std::array<double, 2>, 2> g{};
  std::array<double, 3> position{};
  std::array<double, 3> normal{};
  std::array<std::array<double, 2>, 2> a{};
  double mean_curvature = 0.0;
  double norm2_A = 0.0;
  std::array<double, 3> ambient_gradient{};
  double normal_derivative = 0.0;  // <Dbar hbar, nu>
  double weighted_mean_curvature = 0.0;
  std::array<std::array<double, 3>, 3> ambient_hessian{};
  /// Ric_h of the flat ambient in direction nu: Hbar(nu, nu).
  double ambient_ric_h_nu_nu = 0.0;
};

/// Throws RankDeficient when d1F, d2F are dependent at p.
ShapePointData shape_at(const Immersion& imm, std::span<const double> p);

/// Statistics of |H - <Dbar hbar, nu>| over the plan; `max` is the residual.
MarginStats h_minimality_residual(const Immersion& imm, const SamplePlan& plan);

struct SplittingResidual {
  double ambient_laplacian = 0.0;        // Dbar^2 f traced
  double intrinsic_laplacian = 0.0;      // Delta (f o F)
  double ambient_drift_laplacian = 0.0;  // Delta_hbar f
  double intrinsic_drift_laplacian = 0.0;
  double plain = 0.0;  // |Delta-bar f - (Delta f + H f_nu + Hbar_f(nu,nu))|
  double drift = 0.0;  // same with drift Laplacians and H_h
};

/// Both sides of the hypersurface splitting of the ambient (drift) Laplacian
/// for an ambient function `f` (expression in x1, x2, x3).
SplittingResidual splitting_residual(const Immersion& imm, const Expr& f, std::span<const double> p);

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// L_h(fH) evaluated intrinsically against the closed-form right-hand side
/// built from third ambient derivatives, a_ik Hbar_ki, the transport term
/// 2 <grad H, grad f> and H Delta_h f. `f` is a chart expression.
IdentityResidual mean_curvature_identity(const Immersion& imm, const Expr& f, std::span<const double> p);

struct StabilityOptions {
  int quadrature_order = 4;
  /// Fourier modes 0..max_fourier_mode on axisymmetric meshes.
  int max_fourier_mode = 0;
  int count = 1;
  double tol = 1e-8;
  EigenOptions eigen;
};

/// Q(phi) = int (|grad phi|^2 - V phi^2) dv_h with V = |A|^2 + Hbar(nu, nu),
/// restricted to functions vanishing on boundary faces.
struct StabilityProblem {
  Mesh mesh;
  AssembledProblem form;  // K - P after boundary conditions; B is the weighted mass
  SparseMatrix potential;  // P on the full dofs
  SparseMatrix full_form;  // K - P on the full dofs
  int fourier_mode = 0;
};

StabilityProblem build_stability_problem(const Immersion& imm, const Mesh& mesh, int fourier_mode = 0,
                                         int quadrature_order = 4);

/// v^T (K - P) v on full-dof nodal values.
double stability_form_matrix(const StabilityProblem& sp, const Eigen::VectorXd& full);
/// Direct quadrature of |grad phi|^2 + k^2 g^22 phi^2 - V phi^2 for the P1 field phi.
double stability_form_direct(const Immersion& imm, const StabilityProblem& sp, const Eigen::VectorXd& full);

struct StabilityResult {
  double mu1 = 0.0;
  int fourier_mode = 0;  // mode attaining mu1
  bool stable = false;
  double tolerance = 0.0;
  EigenResult eigen;
  std::vector<double> mode_minima;  // mu1 per Fourier mode
  /// Q(1) by both routes (only meaningful on boundaryless charts).
  double q_one_matrix = 0.0;
  double q_one_direct = 0.0;
  bool closed = false;
  /// Q of the first mode-0 eigenvector by both routes.
  double q_check_matrix = 0.0;
  double q_check_direct = 0.0;
  int dofs = 0;
};

/// mu1 of Q over the compactly supported class; stable iff mu1 >= -tol.
StabilityResult stability_verdict(const Immersion& imm, const Mesh& mesh, const StabilityOptions& opts = {});

struct Thm2Report {
  std::vector<HypothesisCheck> hypotheses;
  bool all_pass = false;
  /// Pointwise statistics of the curvature condition margin.
  MarginStats condition;
};

/// Hypotheses of the stability theorem for h-minimal surfaces:
/// h-minimality, parallel ambient Hessian, H != 0, boundary H_h >= 0 and the
/// pointwise curvature condition with intrinsic Ric_h read as lambda_min.
/// Throws InvalidParameter unless c > 0.
Thm2Report thm2_check(const Immersion& imm, double c, const SamplePlan& plan, double tol);

struct ConventionEntry {
  int shape_sign = 1;
  int weight_sign = 1;
  double h_minimality = 0.0;  // max residual over the plan
  double identity = 0.0;      // max L_h(fH) residual over the plan
};

/// h-minimality and L_h(fH) residuals for s in {+1,-1} and hbar -> +-hbar.
std::vector<ConventionEntry> convention_survey(const Immersion& imm, const Expr& f, const SamplePlan& plan);

}  // namespace bakry
