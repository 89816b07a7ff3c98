#include "payne/assembly.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Dense>

#include "payne/errors.hpp"

namespace payne {

namespace {

// Degree-4 symmetric rule on the reference triangle (barycentric points, weights sum to 1).
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

const std::array<QuadPoint, 6>& triangle_rule() {
  static const std::array<QuadPoint, 6> rule = [] {
    constexpr double a = 0.445948490915965;
    constexpr double wa = 0.223381589678011;
    constexpr double b = 0.091576213509771;
    constexpr double wb = 0.109951743655322;
    return std::array<QuadPoint, 6>{{
        {{a, a, 1 - 2 * a}, wa},
        {{a, 1 - 2 * a, a}, wa},
        {{1 - 2 * a, a, a}, wa},
        {{b, b, 1 - 2 * b}, wb},
        {{b, 1 - 2 * b, b}, wb},
        {{1 - 2 * b, b, b}, wb},
    }};
  }();
  return rule;
}

constexpr int kMaxLocal = 6;
using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLocal, kMaxLocal>;
using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxLocal, 1>;

// Polynomial space on one triangle expressed in scaled monomials of
// xi = (x - cx)/h, eta = (y - cy)/h: {1, xi, eta} or {1, xi, eta, xi^2, xi*eta, eta^2}.
class LocalElement {
public:
  LocalElement(const std::array<Point, 3>& corners, int degree) : degree_(degree) {
    center_ = (corners[0] + corners[1] + corners[2]) / 3.0;
    scale_ = std::max({(corners[1] - corners[0]).norm(), (corners[2] - corners[1]).norm(),
                       (corners[0] - corners[2]).norm()});
    count_ = degree == 1 ? 3 : 6;
    functionals_.resize(count_, count_);
    row_ = 0;
  }

  int count() const { return count_; }
  double scale() const { return scale_; }

  void add_value_functional(const Point& p) {
    functionals_.row(row_++) = monomials(p).transpose();
  }

  void add_normal_derivative_functional(const Point& p, const Point& n) {
    auto [dx, dy] = monomial_gradients(p);
    functionals_.row(row_++) = (n.x() * dx + n.y() * dy).transpose();
  }

  // Coefficients of the nodal basis: column j holds phi_j in monomial coordinates.
  void finalize() {
    if (row_ != count_) throw MeshError("element functional count mismatch");
    coefficients_ = functionals_.fullPivLu().inverse();
  }

  LocalVector values(const Point& p) const { return coefficients_.transpose() * monomials(p); }

  std::pair<LocalVector, LocalVector> gradients(const Point& p) const {
    auto [dx, dy] = monomial_gradients(p);
    return {coefficients_.transpose() * dx, coefficients_.transpose() * dy};
  }

  // rows u_xx, u_xy, u_yy of the nodal basis (constant for quadratics)
  LocalMatrix hessians() const {
    LocalMatrix hess = LocalMatrix::Zero(3, count_);
    if (degree_ == 2) {
      const double s = 1.0 / (scale_ * scale_);
      hess.row(0) = 2.0 * s * coefficients_.row(3);
      hess.row(1) = s * coefficients_.row(4);
      hess.row(2) = 2.0 * s * coefficients_.row(5);
    }
    return hess;
  }

  LocalVector laplacians() const {
    LocalVector lap = LocalVector::Zero(count_);
    if (degree_ == 2) {
      const double s = 2.0 / (scale_ * scale_);
      lap = s * (coefficients_.row(3) + coefficients_.row(5)).transpose();
    }
    return lap;
  }

private:
  LocalVector monomials(const Point& p) const {
    const double xi = (p.x() - center_.x()) / scale_;
    const double eta = (p.y() - center_.y()) / scale_;
    LocalVector m(count_);
    m(0) = 1.0;
    m(1) = xi;
    m(2) = eta;
    if (degree_ == 2) {
      m(3) = xi * xi;
      m(4) = xi * eta;
      m(5) = eta * eta;
    }
    return m;
  }

  std::pair<LocalVector, LocalVector> monomial_gradients(const Point& p) const {
    const double xi = (p.x() - center_.x()) / scale_;
    const double eta = (p.y() - center_.y()) / scale_;
    LocalVector dx = LocalVector::Zero(count_);
    LocalVector dy = LocalVector::Zero(count_);
    dx(1) = 1.0;
    dy(2) = 1.0;
    if (degree_ == 2) {
      dx(3) = 2.0 * xi;
      dx(4) = eta;
      dy(4) = xi;
      dy(5) = 2.0 * eta;
    }
    return {dx / scale_, dy / scale_};
  }

  int degree_;
  int count_ = 0;
  int row_ = 0;
  Point center_;
  double scale_ = 1.0;
  LocalMatrix functionals_;
  LocalMatrix coefficients_;
};

std::array<Point, 3> corners_of(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  return {mesh.vertices()[tri[0]], mesh.vertices()[tri[1]], mesh.vertices()[tri[2]]};
}

void check_nondegenerate(const Mesh& mesh, std::size_t t, double local_h) {
  if (mesh.triangle_area(t) < 1e-14 * local_h * local_h) {
    throw MeshError("degenerate triangle " + std::to_string(t));
  }
}

LocalElement build_element(const Mesh& mesh, std::size_t t, ElementKind kind) {
  const auto corners = corners_of(mesh, t);
  LocalElement element(corners, kind == ElementKind::lagrange1 ? 1 : 2);
  check_nondegenerate(mesh, t, element.scale());
  for (const auto& c : corners) element.add_value_functional(c);
  if (kind != ElementKind::lagrange1) {
    for (int i = 0; i < 3; ++i) {
      const Edge& e = mesh.edges()[mesh.triangle_edges()[t][i]];
      if (kind == ElementKind::lagrange2) {
        element.add_value_functional(e.midpoint);
      } else {
        element.add_normal_derivative_functional(e.midpoint, e.normal);
      }
    }
  }
  element.finalize();
  return element;
}

std::array<int, kMaxLocal> global_indices(const Mesh& mesh, std::size_t t, ElementKind kind) {
  std::array<int, kMaxLocal> idx{};
  const auto& tri = mesh.triangles()[t];
  const auto& te = mesh.triangle_edges()[t];
  const int nv = static_cast<int>(mesh.num_vertices());
  for (int i = 0; i < 3; ++i) idx[i] = tri[i];
  if (kind != ElementKind::lagrange1) {
    for (int i = 0; i < 3; ++i) idx[3 + i] = nv + te[i];
  }
  return idx;
}

Point point_from_bary(const std::array<Point, 3>& c, const std::array<double, 3>& b) {
  return b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
}

struct Scatter {
  std::vector<Eigen::Triplet<double>> entries;

  void add(const std::array<int, kMaxLocal>& idx, const LocalMatrix& local) {
    for (int i = 0; i < local.rows(); ++i) {
      for (int j = 0; j < local.cols(); ++j) {
        if (local(i, j) != 0.0) entries.emplace_back(idx[i], idx[j], local(i, j));
      }
    }
  }

  SparseMatrix build(int n) const {
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
  }
};

OperatorPair assemble(const Mesh& mesh, ElementKind kind) {
  OperatorPair pair;
  pair.dofmap = make_dofmap(mesh, kind);
  const int n = pair.dofmap.size();
  const auto& rule = triangle_rule();

  Scatter stiffness, mass, bending, laplace;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const LocalElement element = build_element(mesh, t, kind);
    const auto corners = corners_of(mesh, t);
    const double area = mesh.triangle_area(t);
    const int nl = element.count();

    LocalMatrix k = LocalMatrix::Zero(nl, nl);
    LocalMatrix m = LocalMatrix::Zero(nl, nl);
    for (const auto& q : rule) {
      const Point p = point_from_bary(corners, q.bary);
      const LocalVector phi = element.values(p);
      const auto [gx, gy] = element.gradients(p);
      const double w = q.weight * area;
      k.noalias() += w * (gx * gx.transpose() + gy * gy.transpose());
      m.noalias() += w * (phi * phi.transpose());
    }
    const auto idx = global_indices(mesh, t, kind);
    stiffness.add(idx, k);
    mass.add(idx, m);
    if (kind == ElementKind::morley) {
      const LocalVector lap = element.laplacians();
      laplace.add(idx, area * (lap * lap.transpose()));
      const LocalMatrix hess = element.hessians();
      LocalMatrix b = hess.row(0).transpose() * hess.row(0) + 2.0 * hess.row(1).transpose() * hess.row(1) +
                      hess.row(2).transpose() * hess.row(2);
      bending.add(idx, area * b);
    }
  }
  pair.K_grad = stiffness.build(n);
  pair.M = mass.build(n);

  if (kind == ElementKind::morley) {
    pair.A_bend = bending.build(n);
    pair.A_laplace = laplace.build(n);
    pair.B_normal = boundary_normal_mass(mesh, pair.dofmap);
    // for u = 0 on a curved boundary, int (lap u)^2 = int |D^2u|^2 + int kappa (du/dn)^2;
    // without this term the Navier pencil converges to the Hessian-form plate instead
    if (mesh.domain_tag() == DomainTag::disk && mesh.radius() > 0.0) {
      pair.A_bend += pair.B_normal / mesh.radius();
      pair.A_bend.makeCompressed();
    }
    return pair;
  }

  Scatter trace;
  const int nv = static_cast<int>(mesh.num_vertices());
  for (int k : mesh.boundary_edges()) {
    const Edge& e = mesh.edges()[k];
    const double len = e.length;
    std::array<int, kMaxLocal> idx{e.vertices[0], e.vertices[1], nv + k};
    if (kind == ElementKind::lagrange1) {
      LocalMatrix local(2, 2);
      local << 2, 1, 1, 2;
      trace.add(idx, local * (len / 6.0));
    } else {
      LocalMatrix local(3, 3);
      local << 4, -1, 2, -1, 4, 2, 2, 2, 16;
      trace.add(idx, local * (len / 30.0));
    }
  }
  pair.B_trace = trace.build(n);
  return pair;
}

}  // namespace

DofMap make_dofmap(const Mesh& mesh, ElementKind kind) {
  DofMap map;
  map.kind = kind;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    map.dofs.push_back({DofType::vertex_value, static_cast<int>(v)});
    map.on_boundary.push_back(mesh.vertex_on_boundary()[v]);
  }
  if (kind != ElementKind::lagrange1) {
    const DofType type =
        kind == ElementKind::lagrange2 ? DofType::edge_midpoint_value : DofType::edge_normal_derivative;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      map.dofs.push_back({type, static_cast<int>(e)});
      map.on_boundary.push_back(mesh.edges()[e].boundary);
    }
  }
  return map;
}

OperatorPair assemble_lagrange(const Mesh& mesh, int order) {
  if (order != 1 && order != 2) throw DomainError("Lagrange order must be 1 or 2");
  return assemble(mesh, order == 1 ? ElementKind::lagrange1 : ElementKind::lagrange2);
}

OperatorPair assemble_morley(const Mesh& mesh) { return assemble(mesh, ElementKind::morley); }

SparseMatrix boundary_normal_mass(const Mesh& mesh, const DofMap& dofmap) {
  if (dofmap.kind != ElementKind::morley) throw KindError("boundary normal mass needs a Morley dofmap");
  const int nv = static_cast<int>(mesh.num_vertices());
  std::vector<Eigen::Triplet<double>> entries;
  for (int k : mesh.boundary_edges()) entries.emplace_back(nv + k, nv + k, mesh.edges()[k].length);
  SparseMatrix b(dofmap.size(), dofmap.size());
  b.setFromTriplets(entries.begin(), entries.end());
  return b;
}

DofPartition classify_dofs(const DofMap& dofmap, BoundaryCondition condition) {
  const bool morley = dofmap.kind == ElementKind::morley;
  if (morley && condition == BoundaryCondition::dirichlet_value) {
    throw KindError("dirichlet-value condition applies to Lagrange elements; use navier or clamped");
  }
  if (!morley && condition != BoundaryCondition::dirichlet_value) {
    throw KindError("clamped and navier conditions need the Morley element");
  }
  DofPartition part;
  for (int i = 0; i < dofmap.size(); ++i) {
    bool constrained = dofmap.on_boundary[i];
    if (condition == BoundaryCondition::navier) {
      constrained = constrained && dofmap.dofs[i].type == DofType::vertex_value;
    }
    (constrained ? part.constrained : part.free).push_back(i);
  }
  return part;
}

std::vector<int> boundary_normal_dofs(const DofMap& dofmap) {
  std::vector<int> idx;
  for (int i = 0; i < dofmap.size(); ++i) {
    if (dofmap.on_boundary[i] && dofmap.dofs[i].type == DofType::edge_normal_derivative) idx.push_back(i);
  }
  return idx;
}

Vector morley_interpolate(const Mesh& mesh, const DofMap& dofmap,
                          const std::function<double(const Point&)>& value,
                          const std::function<Point(const Point&)>& gradient) {
  if (dofmap.kind != ElementKind::morley) throw KindError("Morley interpolation needs a Morley dofmap");
  Vector x(dofmap.size());
  for (int i = 0; i < dofmap.size(); ++i) {
    const auto& d = dofmap.dofs[i];
    if (d.type == DofType::vertex_value) {
      x(i) = value(mesh.vertices()[d.entity]);
    } else {
      const Edge& e = mesh.edges()[d.entity];
      x(i) = gradient(e.midpoint).dot(e.normal);
    }
  }
  return x;
}

Vector lagrange_interpolate(const Mesh& mesh, const DofMap& dofmap,
                            const std::function<double(const Point&)>& value) {
  if (dofmap.kind == ElementKind::morley) throw KindError("Lagrange interpolation needs a Lagrange dofmap");
  Vector x(dofmap.size());
  for (int i = 0; i < dofmap.size(); ++i) {
    const auto& d = dofmap.dofs[i];
    x(i) = d.type == DofType::vertex_value ? value(mesh.vertices()[d.entity])
                                           : value(mesh.edges()[d.entity].midpoint);
  }
  return x;
}

void write_triplets(std::ostream& os, const SparseMatrix& matrix) {
  char buf[96];
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace payne
