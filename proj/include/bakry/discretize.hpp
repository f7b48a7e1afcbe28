#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "bakry/geometry.hpp"

namespace bakry {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Quadrature on the reference segment [0,1] or the reference triangle
/// (0,0),(1,0),(0,1). Weights sum to the reference volume (1 or 1/2).
struct QuadratureRule {
  int dim = 1;
  int order = 4;  // polynomial degree integrated exactly
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  static QuadratureRule segment(int order);
  static QuadratureRule triangle(int order);
  static QuadratureRule for_dim(int dim, int order) { return dim == 1 ? segment(order) : triangle(order); }
};

/// Structured simplicial mesh of a chart box. Vertices along a periodic axis
/// are duplicated at the seam so every element has unwrapped coordinates;
/// `dof_of_vertex` merges the duplicates.
struct Mesh {
  int dim = 1;        // element dimension
  int chart_dim = 1;  // dimension of the manifold being discretized
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> elements;  // first dim+1 entries used
  std::vector<std::uint8_t> face_bits;       // per vertex, bit Face::id()
  std::vector<std::pair<int, int>> periodic_pairs;
  std::vector<int> dof_of_vertex;
  int num_dofs = 0;
  std::vector<int> cells;

  /// Axisymmetric reduction: a 1D mesh along x1 of a 2D manifold whose
  /// metric and weight do not depend on the periodic coordinate x2.
  bool axisymmetric = false;
  double reduced_length = 0.0;
  double reduced_coordinate = 0.0;

  std::vector<int> boundary_dofs() const;
  double element_volume(int e) const;
};

Mesh build_mesh(const WeightedManifold& m, std::span<const int> cells);

/// 1D mesh along x1 for a manifold with periodic x2 and axisymmetric fields.
/// Throws NotAxisymmetric when g12 or any x2-derivative of g, h is nonzero.
Mesh build_axisymmetric_mesh(const WeightedManifold& m, int cells);

enum class BoundaryCondition { None, Dirichlet, Neumann };

/// The discrete weighted eigenproblem K v = lambda B v.
struct AssembledProblem {
  SparseMatrix K;
  SparseMatrix B;
  /// Full dof index of each row (identity before boundary conditions).
  std::vector<int> dof_map;
  std::vector<int> dirichlet_dofs;
  int quadrature_order = 4;
  int fourier_mode = 0;
  BoundaryCondition bc = BoundaryCondition::None;
  bool deflate_constant = false;

  int size() const { return static_cast<int>(K.rows()); }
};

struct AssemblyOptions {
  int quadrature_order = 4;
  /// Angular wavenumber for axisymmetric meshes: adds k^2 g^{22} to the stiffness.
  int fourier_mode = 0;
};

AssembledProblem assemble(const WeightedManifold& m, const Mesh& mesh, const AssemblyOptions& opts = {});

/// Mass-type matrix with an extra pointwise factor: int V phi_a phi_b dv_h.
SparseMatrix assemble_weighted_mass(const WeightedManifold& m, const Mesh& mesh, int quadrature_order,
                                    const std::function<double(const Point&)>& factor);

/// Dirichlet eliminates boundary dofs; Neumann leaves the matrices and asks the
/// eigensolver to deflate the constant mode. Throws NoBoundary.
AssembledProblem apply_bc(const AssembledProblem& p, BoundaryCondition kind, const Mesh& mesh);

/// int field dv_h by element quadrature.
double integrate(const Mesh& mesh, const WeightedManifold& m, const std::function<double(const Point&)>& field,
                 int quadrature_order = 4);
/// int prod(fields) dv_h.
double integrate(const Mesh& mesh, const WeightedManifold& m, std::span<const Expr> fields, int quadrature_order = 4);

/// A piecewise-linear field sampled at one quadrature point.
struct P1Sample {
  Point x{};
  double value = 0.0;
  std::array<double, 2> grad{};  // chart gradient (x1 only on 1D meshes)
  double g_inv[2][2]{};          // inverse chart metric of the manifold
};

/// int F(sample) dv_h for the P1 field with nodal values `dofs` (full dof
/// numbering). On axisymmetric meshes the field is constant in x2.
double integrate_p1(const Mesh& mesh, const WeightedManifold& m, const Eigen::VectorXd& dofs,
                    const std::function<double(const P1Sample&)>& integrand, int quadrature_order = 4);

/// Scatters a vector on the reduced dofs of `p` back to the full numbering (zeros elsewhere).
Eigen::VectorXd expand_to_full(const AssembledProblem& p, const Mesh& mesh, const Eigen::VectorXd& reduced);

/// int_{face} field e^{-h} da with the induced boundary measure. For n = 1 the
/// face is a point and the integral is the point value.
double integrate_boundary(const Mesh& mesh, const WeightedManifold& m, const Face& face,
                          const std::function<double(const Point&)>& field, int quadrature_order = 4);

/// Symmetric coordinate dump: "dim nnz" then "i j value" sorted by (i, j).
void write_matrix(std::ostream& os, const SparseMatrix& a);

}  // namespace bakry
