#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "payne/mesh.hpp"

namespace payne {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ElementKind { lagrange1, lagrange2, morley };

enum class DofType { vertex_value, edge_midpoint_value, edge_normal_derivative };

struct DofDescriptor {
  DofType type;
  int entity;  // vertex or edge index
};

/// Global DOF numbering: vertex DOFs first (in vertex order), then one DOF per edge.
struct DofMap {
  ElementKind kind = ElementKind::lagrange1;
  std::vector<DofDescriptor> dofs;
  std::vector<bool> on_boundary;

  int size() const { return static_cast<int>(dofs.size()); }
};

DofMap make_dofmap(const Mesh& mesh, ElementKind kind);

/// Assembled quadratic forms over one DofMap. Forms that do not apply to the kind are
/// left as 0x0 matrices (A_bend, A_laplace, B_normal for Lagrange; B_trace for Morley).
struct OperatorPair {
  SparseMatrix K_grad;    // sum_T int_T grad u . grad v
  SparseMatrix M;         // int u v
  // sum_T int_T D^2u : D^2v, plus int kappa (du/dn)(dv/dn) on disk meshes.
  // The element-wise lap u lap v form has a kernel of piecewise harmonic Morley
  // functions; the corrected form agrees with it on H^2 functions vanishing on the boundary.
  SparseMatrix A_bend;
  SparseMatrix A_laplace;  // sum_T int_T lap u lap v (singular, diagnostics only)
  SparseMatrix B_trace;   // int_{dOmega} u v ds
  SparseMatrix B_normal;  // int_{dOmega} (du/dn)(dv/dn) ds, edge-midpoint rule
  DofMap dofmap;
};

/// P1 or P2 Lagrange forms with degree-4 quadrature.
OperatorPair assemble_lagrange(const Mesh& mesh, int order);

/// Morley element: vertex values plus edge-midpoint normal derivatives.
OperatorPair assemble_morley(const Mesh& mesh);

/// Diagonal boundary normal-derivative mass; entry |e| on each boundary edge DOF.
SparseMatrix boundary_normal_mass(const Mesh& mesh, const DofMap& dofmap);

enum class BoundaryCondition { dirichlet_value, clamped, navier };

struct DofPartition {
  std::vector<int> constrained;
  std::vector<int> free;
};

/// Splits DOFs into homogeneous-constrained and free sets, both ascending.
DofPartition classify_dofs(const DofMap& dofmap, BoundaryCondition condition);

/// DOF indices of the boundary-edge normal derivatives (Morley).
std::vector<int> boundary_normal_dofs(const DofMap& dofmap);

/// Morley interpolant of a C^1 function given its value and gradient.
Vector morley_interpolate(const Mesh& mesh, const DofMap& dofmap,
                          const std::function<double(const Point&)>& value,
                          const std::function<Point(const Point&)>& gradient);

/// Lagrange nodal interpolant.
Vector lagrange_interpolate(const Mesh& mesh, const DofMap& dofmap,
                            const std::function<double(const Point&)>& value);

/// Every stored nonzero as a `row col value` line, 0-based, 17 significant digits.
void write_triplets(std::ostream& os, const SparseMatrix& matrix);

}  // namespace payne
