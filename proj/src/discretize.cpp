#include "bakry/discretize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "bakry/errors.hpp"

namespace bakry {
namespace {

// Gauss-Legendre nodes/weights on [0,1] with n points (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  // Ascending order.
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
}

void add_orbit3(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.points.push_back({a, a});
  q.points.push_back({b, a});
  q.points.push_back({a, b});
  for (int i = 0; i < 3; ++i) q.weights.push_back(0.5 * w);
}

void add_orbit6(QuadratureRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double pts[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
  for (const auto& p : pts) {
    q.points.push_back({p[0], p[1]});
    q.weights.push_back(0.5 * w);
  }
}

struct Measure {
  double dmu = 0.0;  // sqrt(det g) e^{-h}
  double ginv[2][2]{};
};

Measure measure_at(const WeightedManifold& m, const Point& x) {
  const int n = m.dim();
  double g[2][2];
  m.fields().metric_values(x, g);
  Measure out;
  double det = 0.0;
  if (n == 1) {
    det = g[0][0];
    out.ginv[0][0] = 1.0 / g[0][0];
  } else {
    det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    out.ginv[0][0] = g[1][1] / det;
    out.ginv[1][1] = g[0][0] / det;
    out.ginv[0][1] = out.ginv[1][0] = -g[0][1] / det;
  }
  if (!(det > 0.0) || !std::isfinite(det)) throw DegenerateMetric("metric degenerate at a quadrature point");
  out.dmu = std::sqrt(det) * std::exp(-m.fields().weight_value(x));
  return out;
}

// Reference-element data for one mesh element.
struct ElementMap {
  int nv = 2;
  Point origin{};
  double jac[2][2]{};
  double abs_det = 0.0;
  double grads[3][2]{};  // chart gradients of the barycentric basis

  Point map(const std::array<double, 2>& xi) const {
    Point x = origin;
    x[0] += jac[0][0] * xi[0] + jac[0][1] * xi[1];
    x[1] += jac[1][0] * xi[0] + jac[1][1] * xi[1];
    return x;
  }
  void basis(const std::array<double, 2>& xi, double phi[3]) const {
    if (nv == 2) {
      phi[0] = 1.0 - xi[0];
      phi[1] = xi[0];
    } else {
      phi[0] = 1.0 - xi[0] - xi[1];
      phi[1] = xi[0];
      phi[2] = xi[1];
    }
  }
};

ElementMap element_map(const Mesh& mesh, int e) {
  ElementMap em;
  const auto& el = mesh.elements[e];
  if (mesh.dim == 1) {
    em.nv = 2;
    em.origin = mesh.vertices[el[0]];
    const double len = mesh.vertices[el[1]][0] - mesh.vertices[el[0]][0];
    em.jac[0][0] = len;
    em.abs_det = std::abs(len);
    em.grads[0][0] = -1.0 / len;
    em.grads[1][0] = 1.0 / len;
    return em;
  }
  em.nv = 3;
  const Point& a = mesh.vertices[el[0]];
  const Point& b = mesh.vertices[el[1]];
  const Point& c = mesh.vertices[el[2]];
  em.origin = a;
  em.jac[0][0] = b[0] - a[0];
  em.jac[0][1] = c[0] - a[0];
  em.jac[1][0] = b[1] - a[1];
  em.jac[1][1] = c[1] - a[1];
  const double det = em.jac[0][0] * em.jac[1][1] - em.jac[0][1] * em.jac[1][0];
  em.abs_det = std::abs(det);
  // grad phi = J^{-T} grad_ref phi
  const double inv[2][2] = {{em.jac[1][1] / det, -em.jac[0][1] / det}, {-em.jac[1][0] / det, em.jac[0][0] / det}};
  const double ref[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int v = 0; v < 3; ++v)
    for (int i = 0; i < 2; ++i) em.grads[v][i] = inv[0][i] * ref[v][0] + inv[1][i] * ref[v][1];
  return em;
}

Point quadrature_point(const Mesh& mesh, const ElementMap& em, const std::array<double, 2>& xi) {
  Point x = em.map(xi);
  if (mesh.axisymmetric) x[1] = mesh.reduced_coordinate;
  return x;
}

}  // namespace

QuadratureRule QuadratureRule::segment(int order) {
  if (order < 1) throw InvalidParameter("quadrature order must be >= 1");
  QuadratureRule q;
  q.dim = 1;
  q.order = order;
  std::vector<double> x, w;
  gauss_legendre((order + 2) / 2, x, w);
  for (std::size_t i = 0; i < x.size(); ++i) {
    q.points.push_back({x[i], 0.0});
    q.weights.push_back(w[i]);
  }
  return q;
}

QuadratureRule QuadratureRule::triangle(int order) {
  if (order < 1) throw InvalidParameter("quadrature order must be >= 1");
  QuadratureRule q;
  q.dim = 2;
  q.order = order;
  switch (order) {
    case 1:
      q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      q.weights.push_back(0.5);
      return q;
    case 2:
      add_orbit3(q, 1.0 / 6.0, 1.0 / 3.0);
      return q;
    case 3:
    case 4:
      add_orbit3(q, 0.445948490915965, 0.223381589678011);
      add_orbit3(q, 0.091576213509771, 0.109951743655322);
      return q;
    case 5:
      q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      q.weights.push_back(0.5 * 0.225);
      add_orbit3(q, 0.470142064105115, 0.132394152788506);
      add_orbit3(q, 0.101286507323456, 0.125939180544827);
      return q;
    case 6:
      add_orbit3(q, 0.249286745170910, 0.116786275726379);
      add_orbit3(q, 0.063089014491502, 0.050844906370207);
      add_orbit6(q, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      return q;
    default: break;
  }
  // Collapsed tensor Gauss rule: (u, v) in [0,1]^2 -> (u, v (1 - u)).
  std::vector<double> x, w;
  gauss_legendre((order + 3) / 2, x, w);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      q.points.push_back({x[i], x[j] * (1.0 - x[i])});
      q.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
    }
  return q;
}

std::vector<int> Mesh::boundary_dofs() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (face_bits[v] != 0) out.push_back(dof_of_vertex[v]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Mesh::element_volume(int e) const { return element_map(*this, e).abs_det / (dim == 1 ? 1.0 : 2.0); }

Mesh build_mesh(const WeightedManifold& m, std::span<const int> cells) {
  const Domain& dom = m.domain();
  const int n = dom.dim();
  if (static_cast<int>(cells.size()) < n) throw ResolutionTooSmall("mesh needs a cell count per axis");
  for (int a = 0; a < n; ++a)
    if (cells[a] < 2) throw ResolutionTooSmall("mesh needs at least 2 cells per axis");

  Mesh mesh;
  mesh.dim = n;
  mesh.chart_dim = n;
  mesh.cells.assign(cells.begin(), cells.begin() + n);
  const int nx = cells[0];
  const int ny = n == 2 ? cells[1] : 0;
  const int sy = n == 2 ? ny + 1 : 1;
  auto vid = [&](int i, int j) { return i * sy + j; };

  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j < sy; ++j) {
      Point p{};
      const Axis& ax = dom.axes[0];
      p[0] = i == nx ? ax.hi : ax.lo + i * ax.length() / nx;
      std::uint8_t bits = 0;
      if (!ax.periodic) {
        if (i == 0 && ax.lo_end == EndKind::Boundary) bits |= 1u << 0;
        if (i == nx && ax.hi_end == EndKind::Boundary) bits |= 1u << 1;
      }
      if (n == 2) {
        const Axis& ay = dom.axes[1];
        p[1] = j == ny ? ay.hi : ay.lo + j * ay.length() / ny;
        if (!ay.periodic) {
          if (j == 0 && ay.lo_end == EndKind::Boundary) bits |= 1u << 2;
          if (j == ny && ay.hi_end == EndKind::Boundary) bits |= 1u << 3;
        }
      }
      mesh.vertices.push_back(p);
      mesh.face_bits.push_back(bits);
    }
  }

  // Seam identification: the hi copy of a periodic axis maps to the lo copy.
  std::vector<int> rep(mesh.vertices.size());
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < sy; ++j) {
      int ri = i, rj = j;
      if (dom.axes[0].periodic && ri == nx) ri = 0;
      if (n == 2 && dom.axes[1].periodic && rj == ny) rj = 0;
      rep[vid(i, j)] = vid(ri, rj);
      if (vid(ri, rj) != vid(i, j)) mesh.periodic_pairs.emplace_back(vid(i, j), vid(ri, rj));
    }
  mesh.dof_of_vertex.assign(mesh.vertices.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (rep[v] == static_cast<int>(v)) mesh.dof_of_vertex[v] = next++;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) mesh.dof_of_vertex[v] = mesh.dof_of_vertex[rep[v]];
  mesh.num_dofs = next;

  if (n == 1) {
    for (int i = 0; i < nx; ++i) mesh.elements.push_back({vid(i, 0), vid(i + 1, 0), -1});
  } else {
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
        mesh.elements.push_back({v00, v10, v11});
        mesh.elements.push_back({v00, v11, v01});
      }
  }
  return mesh;
}

Mesh build_axisymmetric_mesh(const WeightedManifold& m, int cells) {
  const Domain& dom = m.domain();
  if (dom.dim() != 2 || !dom.axes[1].periodic) throw NotAxisymmetric("axisymmetric reduction needs a 2D chart with periodic x2");
  if (cells < 2) throw ResolutionTooSmall("mesh needs at least 2 cells per axis");

  SamplePlan plan;
  plan.counts = {17, 5};
  plan.inset = 1e-3;
  for (const Point& p : sample_points(dom, plan)) {
    const JetMatrix g = m.fields().metric(p, 1);
    const Jet h = m.fields().weight(p, 1);
    const double scale = std::abs(g[0][0].value()) + std::abs(g[1][1].value()) + 1.0;
    bool ok = std::abs(g[0][1].value()) <= 1e-12 * scale && std::abs(h.d(1)) <= 1e-10 * (1.0 + std::abs(h.value()));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ok = ok && std::abs(g[i][j].d(1)) <= 1e-10 * scale;
    if (!ok) throw NotAxisymmetric("metric or weight depends on x2, or g12 != 0");
  }

  Domain line;
  line.axes = {dom.axes[0]};
  const WeightedManifold line_manifold(line, std::make_shared<ExpressionFields>(ChartMetric{1, {Expr::number(1.0), {}, {}}}, Expr::number(0.0)));
  const int c[1] = {cells};
  Mesh mesh = build_mesh(line_manifold, c);
  mesh.chart_dim = 2;
  mesh.axisymmetric = true;
  mesh.reduced_length = dom.axes[1].length();
  mesh.reduced_coordinate = dom.axes[1].lo;
  return mesh;
}

AssembledProblem assemble(const WeightedManifold& m, const Mesh& mesh, const AssemblyOptions& opts) {
  if (mesh.chart_dim != m.dim()) throw DimensionMismatch("mesh and manifold dimensions differ");
  const QuadratureRule q = QuadratureRule::for_dim(mesh.dim, opts.quadrature_order);
  const double factor = mesh.axisymmetric ? mesh.reduced_length : 1.0;
  const double k2 = static_cast<double>(opts.fourier_mode) * opts.fourier_mode;
  if (opts.fourier_mode != 0 && !mesh.axisymmetric) throw InvalidParameter("Fourier modes need an axisymmetric mesh");

  std::vector<Eigen::Triplet<double>> kt, bt;
  kt.reserve(mesh.elements.size() * 9);
  bt.reserve(mesh.elements.size() * 9);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const ElementMap em = element_map(mesh, static_cast<int>(e));
    const int nv = em.nv;
    double ke[3][3]{}, be[3][3]{};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const Point x = quadrature_point(mesh, em, q.points[iq]);
      Measure mu;
      try {
        mu = measure_at(m, x);
      } catch (const DegenerateMetric&) {
        throw DegenerateMetric("metric degenerate at a quadrature point of element " + std::to_string(e));
      }
      const double wq = q.weights[iq] * em.abs_det * mu.dmu * factor;
      double phi[3];
      em.basis(q.points[iq], phi);
      for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) {
          double s = 0.0;
          for (int i = 0; i < mesh.dim; ++i)
            for (int j = 0; j < mesh.dim; ++j) s += em.grads[a][i] * mu.ginv[i][j] * em.grads[b][j];
          if (k2 != 0.0) s += k2 * mu.ginv[1][1] * phi[a] * phi[b];
          ke[a][b] += wq * s;
          be[a][b] += wq * phi[a] * phi[b];
        }
    }
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) {
        const int da = mesh.dof_of_vertex[mesh.elements[e][a]];
        const int db = mesh.dof_of_vertex[mesh.elements[e][b]];
        const int lo = std::min(a, b), hi = std::max(a, b);
        kt.emplace_back(da, db, ke[lo][hi]);
        bt.emplace_back(da, db, be[lo][hi]);
      }
  }
  AssembledProblem p;
  p.K.resize(mesh.num_dofs, mesh.num_dofs);
  p.B.resize(mesh.num_dofs, mesh.num_dofs);
  p.K.setFromTriplets(kt.begin(), kt.end());
  p.B.setFromTriplets(bt.begin(), bt.end());
  p.dof_map.resize(mesh.num_dofs);
  for (int i = 0; i < mesh.num_dofs; ++i) p.dof_map[i] = i;
  p.quadrature_order = opts.quadrature_order;
  p.fourier_mode = opts.fourier_mode;
  return p;
}

SparseMatrix assemble_weighted_mass(const WeightedManifold& m, const Mesh& mesh, int quadrature_order,
                                    const std::function<double(const Point&)>& field) {
  const QuadratureRule q = QuadratureRule::for_dim(mesh.dim, quadrature_order);
  const double factor = mesh.axisymmetric ? mesh.reduced_length : 1.0;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(mesh.elements.size() * 9);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const ElementMap em = element_map(mesh, static_cast<int>(e));
    double me[3][3]{};
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const Point x = quadrature_point(mesh, em, q.points[iq]);
      const Measure mu = measure_at(m, x);
      const double wq = q.weights[iq] * em.abs_det * mu.dmu * factor * field(x);
      double phi[3];
      em.basis(q.points[iq], phi);
      for (int a = 0; a < em.nv; ++a)
        for (int b = a; b < em.nv; ++b) me[a][b] += wq * phi[a] * phi[b];
    }
    for (int a = 0; a < em.nv; ++a)
      for (int b = 0; b < em.nv; ++b)
        t.emplace_back(mesh.dof_of_vertex[mesh.elements[e][a]], mesh.dof_of_vertex[mesh.elements[e][b]], me[std::min(a, b)][std::max(a, b)]);
  }
  SparseMatrix out(mesh.num_dofs, mesh.num_dofs);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

AssembledProblem apply_bc(const AssembledProblem& p, BoundaryCondition kind, const Mesh& mesh) {
  AssembledProblem out = p;
  out.bc = kind;
  if (kind == BoundaryCondition::Neumann) {
    out.deflate_constant = p.fourier_mode == 0;
    return out;
  }
  if (kind != BoundaryCondition::Dirichlet) return out;
  const std::vector<int> fixed = mesh.boundary_dofs();
  if (fixed.empty()) throw NoBoundary("Dirichlet condition requested on a mesh without boundary vertices");
  const int n = p.size();
  std::vector<int> new_index(n, -1);
  std::vector<int> dof_map;
  for (int i = 0, k = 0; i < n; ++i) {
    if (std::binary_search(fixed.begin(), fixed.end(), p.dof_map[i])) continue;
    new_index[i] = k++;
    dof_map.push_back(p.dof_map[i]);
  }
  auto reduce = [&](const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double>> t;
    for (int col = 0; col < a.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
        const int r = new_index[it.row()], c = new_index[it.col()];
        if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
      }
    SparseMatrix b(static_cast<Eigen::Index>(dof_map.size()), static_cast<Eigen::Index>(dof_map.size()));
    b.setFromTriplets(t.begin(), t.end());
    return b;
  };
  out.K = reduce(p.K);
  out.B = reduce(p.B);
  out.dof_map = std::move(dof_map);
  out.dirichlet_dofs = fixed;
  out.deflate_constant = false;
  return out;
}

double integrate(const Mesh& mesh, const WeightedManifold& m, const std::function<double(const Point&)>& field,
                 int quadrature_order) {
  const QuadratureRule q = QuadratureRule::for_dim(mesh.dim, quadrature_order);
  const double factor = mesh.axisymmetric ? mesh.reduced_length : 1.0;
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const ElementMap em = element_map(mesh, static_cast<int>(e));
    double acc = 0.0;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      const Point x = quadrature_point(mesh, em, q.points[iq]);
      acc += q.weights[iq] * measure_at(m, x).dmu * field(x);
    }
    total += acc * em.abs_det * factor;
  }
  return total;
}

double integrate(const Mesh& mesh, const WeightedManifold& m, std::span<const Expr> fields, int quadrature_order) {
  const int n = m.dim();
  return integrate(
      mesh, m,
      [&](const Point& x) {
        double v = 1.0;
        for (const Expr& f : fields) v *= f.evaluate(std::span<const double>(x.data(), n));
        return v;
      },
      quadrature_order);
}

double integrate_p1(const Mesh& mesh, const WeightedManifold& m, const Eigen::VectorXd& dofs,
                    const std::function<double(const P1Sample&)>& integrand, int quadrature_order) {
  if (dofs.size() != mesh.num_dofs) throw DimensionMismatch("nodal vector length differs from the dof count");
  const QuadratureRule q = QuadratureRule::for_dim(mesh.dim, quadrature_order);
  const double factor = mesh.axisymmetric ? mesh.reduced_length : 1.0;
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const ElementMap em = element_map(mesh, static_cast<int>(e));
    double nodal[3];
    for (int a = 0; a < em.nv; ++a) nodal[a] = dofs[mesh.dof_of_vertex[mesh.elements[e][a]]];
    std::array<double, 2> grad{};
    for (int a = 0; a < em.nv; ++a)
      for (int i = 0; i < mesh.dim; ++i) grad[i] += nodal[a] * em.grads[a][i];
    double acc = 0.0;
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      P1Sample s;
      s.x = quadrature_point(mesh, em, q.points[iq]);
      const Measure mu = measure_at(m, s.x);
      double phi[3];
      em.basis(q.points[iq], phi);
      for (int a = 0; a < em.nv; ++a) s.value += nodal[a] * phi[a];
      s.grad = grad;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s.g_inv[i][j] = mu.ginv[i][j];
      acc += q.weights[iq] * mu.dmu * integrand(s);
    }
    total += acc * em.abs_det * factor;
  }
  return total;
}

Eigen::VectorXd expand_to_full(const AssembledProblem& p, const Mesh& mesh, const Eigen::VectorXd& reduced) {
  if (reduced.size() != p.size()) throw DimensionMismatch("vector length differs from the problem size");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.num_dofs);
  for (int i = 0; i < p.size(); ++i) full[p.dof_map[i]] = reduced[i];
  return full;
}

double integrate_boundary(const Mesh& mesh, const WeightedManifold& m, const Face& face,
                          const std::function<double(const Point&)>& field, int quadrature_order) {
  const Domain& dom = m.domain();
  const Point base = face_point(dom, face, dom.dim() == 2 ? dom.axes[1 - face.axis].lo : 0.0);
  if (dom.dim() == 1) return field(base) * std::exp(-m.fields().weight_value(base));
  const int other = 1 - face.axis;
  double g[2][2];
  if (mesh.axisymmetric) {
    if (face.axis != 0) throw InvalidParameter("axisymmetric boundary faces lie on x1");
    Point x = base;
    x[1] = mesh.reduced_coordinate;
    m.fields().metric_values(x, g);
    return mesh.reduced_length * field(x) * std::sqrt(g[1][1]) * std::exp(-m.fields().weight_value(x));
  }
  const Axis& ax = dom.axes[other];
  const int cells = mesh.cells.size() > static_cast<std::size_t>(other) ? mesh.cells[other] : 16;
  const QuadratureRule q = QuadratureRule::segment(quadrature_order);
  double total = 0.0;
  const double hs = ax.length() / cells;
  for (int c = 0; c < cells; ++c) {
    for (std::size_t iq = 0; iq < q.points.size(); ++iq) {
      Point x = base;
      x[other] = ax.lo + (c + q.points[iq][0]) * hs;
      m.fields().metric_values(x, g);
      total += q.weights[iq] * hs * field(x) * std::sqrt(g[other][other]) * std::exp(-m.fields().weight_value(x));
    }
  }
  return total;
}

void write_matrix(std::ostream& os, const SparseMatrix& a) {
  std::vector<std::tuple<int, int, double>> entries;
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it)
      if (it.row() <= it.col()) entries.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  std::sort(entries.begin(), entries.end());
  os << a.rows() << ' ' << entries.size() << '\n';
  os << std::setprecision(17);
  for (const auto& [i, j, v] : entries) os << i << ' ' << j << ' ' << v << '\n';
}

}  // namespace bakry
