#pragma once

#include <string>
#include <vector>

#include "payne/assembly.hpp"
#include "payne/linalg.hpp"
#include "payne/mesh.hpp"
#include "payne/sweep.hpp"

namespace payne {

enum class TraceKind { dtn, ntl };
enum class IdentityKind { friedlander, liu };

std::string to_string(TraceKind k);
std::string to_string(IdentityKind k);
IdentityKind parse_identity_kind(const std::string& name);

inline constexpr double kDefaultMargin = 1e-3;

/// Boundary Schur complement of (A - lambda B) at one spectral parameter.
///   dtn: K_grad - lambda M on a Lagrange space, boundary = boundary value DOFs.
///   ntl: A_bend - lambda K_grad on the Morley space with boundary values fixed to 0,
///        boundary = boundary edge normal-derivative DOFs.
struct TraceOperator {
  TraceKind kind = TraceKind::dtn;
  double lambda = 0.0;
  Matrix matrix;
  Matrix boundary_mass;
  std::string descriptor;
  double margin = 0.0;  // relative distance to the nearest interior-block eigenvalue
  Matrix extension;     // interior values = extension * boundary values
  Inertia interior_inertia;
  std::vector<int> interior;  // global DOF indices
  std::vector<int> boundary;
  int dof_count = 0;

  /// Full-length DOF vector with the given boundary data and its optimal interior.
  Vector lift(const Vector& boundary_values) const;
};

struct TraceSpectrum {
  std::vector<double> values;  // generalized eigenvalues of (matrix, boundary_mass)
  double beta1 = 0.0;
  int neg_count = 0;           // from the inertia of `matrix`
  Vector beta1_vector;         // boundary coordinates, normalized in boundary_mass
};

struct IdentityReport {
  IdentityKind kind = IdentityKind::friedlander;
  double lambda = 0.0;
  int neg_count = 0;
  int lhs_counting = 0;  // N_N,h or N_nav,h
  int rhs_counting = 0;  // N_D,h or N_buck,h
  bool identity_holds = false;
  double margin = 0.0;   // relative distance to both discrete spectra
  int interior_neg = 0;  // inertia of the interior block
  int full_neg = 0;      // inertia of the whole pencil matrix
  bool haynsworth_holds = false;
};

/// Assembled matrices, index sets and both discrete spectra for one mesh and one kind.
/// Immutable after construction, so it can be shared between scan workers.
class TraceProblem {
public:
  TraceProblem(const Mesh& mesh, TraceKind kind, int order = 2, double delta = kDefaultMargin);

  TraceKind kind() const { return kind_; }
  double delta() const { return delta_; }
  const std::string& descriptor() const { return descriptor_; }
  const OperatorPair& pair() const { return pair_; }
  int dof_count() const { return pair_.dofmap.size(); }

  /// Eigenvalues of the interior block pencil (Dirichlet or clamped) and of the full pencil
  /// (Neumann or Navier), ascending, all of them.
  const std::vector<double>& excluded_spectrum() const { return interior_values_; }
  const std::vector<double>& full_spectrum() const { return full_values_; }

  double interior_margin(double lambda) const;
  double margin(double lambda) const;

  /// Throws ExcludedSpectrumError when the interior margin is below delta.
  TraceOperator operator_at(double lambda) const;
  /// Throws ExcludedSpectrumError when either margin is below delta.
  IdentityReport identity_at(double lambda) const;

  /// Restrictions to the space the full pencil lives on (free DOFs).
  const Matrix& form() const { return a_; }
  const Matrix& metric() const { return b_; }
  const std::vector<int>& free_dofs() const { return free_; }

private:
  TraceKind kind_;
  double delta_;
  std::string descriptor_;
  OperatorPair pair_;
  std::vector<int> free_;
  std::vector<int> interior_local_, boundary_local_;
  Matrix a_, b_, mass_;
  std::vector<double> interior_values_, full_values_;
};

TraceOperator dtn_operator(const Mesh& mesh, int order, double lambda, double delta = kDefaultMargin);
TraceOperator ntl_operator(const Mesh& mesh, double lambda, double delta = kDefaultMargin);

TraceSpectrum trace_spectrum(const TraceOperator& t);

IdentityReport verify_identity(const Mesh& mesh, IdentityKind kind, double lambda, int order = 2,
                               double delta = kDefaultMargin);

/// Moves lambda clear of both spectra by +-j*delta*|lambda|, j = 1..10. Returns false when no
/// shift works. `shift` receives the applied offset.
bool nudge_clear(const TraceProblem& p, double lambda, bool interior_only, double& shift);

/// Identity at every grid point; columns `lambda,neg_count,lhs,rhs,holds,margin,nudged`.
/// Summary flag `all_hold`.
SweepResult scan_identities(const TraceProblem& p, const std::vector<double>& grid, int threads = 1);
SweepResult scan_identities(const Mesh& mesh, IdentityKind kind, const std::vector<double>& grid,
                            int threads = 1, int order = 2);

/// beta_1 over a grid; columns `lambda,beta1,neg_count,margin,nudged`.
SweepResult scan_beta1(const TraceProblem& p, const std::vector<double>& grid, int threads = 1);

TraceKind trace_kind_for(IdentityKind kind);

}  // namespace payne
