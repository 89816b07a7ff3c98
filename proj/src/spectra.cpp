#include "payne/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "payne/bessel.hpp"
#include "payne/errors.hpp"

namespace payne {

namespace {

constexpr std::size_t kDenseLimit = 800;

Spectrum solve_pencil(const SparseMatrix& A, const SparseMatrix& B, const std::vector<int>& free, int k,
                      Problem problem, const std::string& descriptor, int order, const char* b_name) {
  if (free.empty()) throw MeshError("degenerate mesh: no free degrees of freedom for the " + to_string(problem) + " problem");
  GeneralizedEigen eig;
  try {
    if (free.size() > kDenseLimit) {
      eig = sparse_gen_eigs(sparse_submatrix(A, free), sparse_submatrix(B, free), k);
    } else {
      eig = sym_gen_eigs(submatrix(A, free, free), submatrix(B, free, free), k);
    }
  } catch (const FactorizationError& e) {
    if (std::string(e.what()).find("positive definite") == std::string::npos) throw;
    throw FactorizationError(std::string(b_name) + " is not SPD on the constrained space");
  }
  Spectrum s;
  s.problem = problem;
  s.descriptor = descriptor;
  s.order = order;
  s.values.assign(eig.values.data(), eig.values.data() + eig.values.size());
  s.vectors = Matrix::Zero(A.rows(), k);
  for (std::size_t i = 0; i < free.size(); ++i) s.vectors.row(free[i]) = eig.vectors.row(i);
  return s;
}

std::vector<int> all_dofs(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::string to_string(Problem p) {
  switch (p) {
    case Problem::dirichlet: return "dirichlet";
    case Problem::neumann: return "neumann";
    case Problem::buckling: return "buckling";
    case Problem::navier: return "navier";
  }
  return "unknown";
}

Problem parse_problem(const std::string& name) {
  if (name == "dirichlet") return Problem::dirichlet;
  if (name == "neumann") return Problem::neumann;
  if (name == "buckling") return Problem::buckling;
  if (name == "navier") return Problem::navier;
  throw DomainError("unknown problem `" + name + "`");
}

std::vector<int> multiplicities(const std::vector<double>& values, double rel_tol) {
  std::vector<int> groups;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() &&
           std::abs(values[j] - values[i]) <= rel_tol * std::max(std::abs(values[i]), 1e-300)) {
      ++j;
    }
    groups.push_back(static_cast<int>(j - i));
    i = j;
  }
  return groups;
}

Spectrum laplace_spectrum(const Mesh& mesh, LaplaceBC bc, int order, int k) {
  return laplace_spectrum(mesh, assemble_lagrange(mesh, order), bc, k);
}

Spectrum laplace_spectrum(const Mesh& mesh, const OperatorPair& pair, LaplaceBC bc, int k) {
  if (pair.dofmap.kind == ElementKind::morley) throw KindError("Laplace spectra need a Lagrange assembly");
  const int order = pair.dofmap.kind == ElementKind::lagrange1 ? 1 : 2;
  const std::vector<int> free = bc == LaplaceBC::dirichlet
                                    ? classify_dofs(pair.dofmap, BoundaryCondition::dirichlet_value).free
                                    : all_dofs(pair.dofmap.size());
  return solve_pencil(pair.K_grad, pair.M, free, k, bc == LaplaceBC::dirichlet ? Problem::dirichlet : Problem::neumann,
                      mesh.hash(), order, "mass matrix");
}

Spectrum buckling_spectrum(const Mesh& mesh, int k) { return buckling_spectrum(mesh, assemble_morley(mesh), k); }

Spectrum buckling_spectrum(const Mesh& mesh, const OperatorPair& morley, int k) {
  if (morley.dofmap.kind != ElementKind::morley) throw KindError("buckling needs the Morley assembly");
  const auto free = classify_dofs(morley.dofmap, BoundaryCondition::clamped).free;
  return solve_pencil(morley.A_bend, morley.K_grad, free, k, Problem::buckling, mesh.hash(), 0,
                      "K_grad (assembly-order bug signal)");
}

Spectrum navier_spectrum(const Mesh& mesh, int k) { return navier_spectrum(mesh, assemble_morley(mesh), k); }

Spectrum navier_spectrum(const Mesh& mesh, const OperatorPair& morley, int k) {
  if (morley.dofmap.kind != ElementKind::morley) throw KindError("navier pencil needs the Morley assembly");
  const auto free = classify_dofs(morley.dofmap, BoundaryCondition::navier).free;
  return solve_pencil(morley.A_bend, morley.K_grad, free, k, Problem::navier, mesh.hash(), 0,
                      "K_grad (assembly-order bug signal)");
}

std::vector<double> pencil_values_below(const SparseMatrix& A, const SparseMatrix& B, const std::vector<int>& free,
                                        double upper) {
  if (free.empty()) return {};
  const Vector w = sym_gen_eigs_below(submatrix(A, free, free), submatrix(B, free, free), upper);
  return {w.data(), w.data() + w.size()};
}

Spectrum disk_oracle(Problem problem, int count, double radius) {
  if (problem == Problem::navier) problem = Problem::dirichlet;
  if (count < 0) throw DomainError("oracle count must be non-negative");
  if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
  constexpr double kMaxArgument = 40.0;

  // (root, multiplicity) over all modes m whose first root can lie below kMaxArgument (j_{m,1} > m).
  std::vector<double> values;
  if (problem == Problem::neumann) values.push_back(0.0);
  for (int m = 0; m < static_cast<int>(kMaxArgument); ++m) {
    std::function<double(double)> f;
    switch (problem) {
      case Problem::dirichlet: f = [m](double x) { return bessel_j(m, x); }; break;
      case Problem::neumann: f = [m](double x) { return bessel_j_derivative(m, x); }; break;
      default: f = [m](double x) { return bessel_j(m + 1, x); }; break;
    }
    for (double root : bracket_roots(f, 0.05, kMaxArgument)) {
      const double v = root * root / (radius * radius);
      values.push_back(v);
      if (m >= 1) values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  if (static_cast<std::size_t>(count) > values.size()) {
    throw RangeError("disk oracle tabulates only " + std::to_string(values.size()) + " " + to_string(problem) +
                     " eigenvalues");
  }
  Spectrum s;
  s.problem = problem;
  s.descriptor = "disk-oracle";
  s.values.assign(values.begin(), values.begin() + count);
  return s;
}

CountResult counting_function(const Spectrum& s, double lambda) { return counting_function(s.values, lambda); }

CountResult counting_function(const std::vector<double>& values, double lambda) {
  CountResult r;
  for (double v : values) {
    if (v < lambda) ++r.count;
    if (std::abs(v - lambda) <= 1e-9 * std::max(std::abs(v), std::abs(lambda))) r.ambiguous = true;
  }
  return r;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "index,value,problem,mesh_hash\n";
  char buf[64];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.values[i]);
    os << (i + 1) << ',' << buf << ',' << to_string(s.problem) << ',' << s.descriptor << '\n';
  }
}

}  // namespace payne
