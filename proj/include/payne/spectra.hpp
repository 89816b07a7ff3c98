#pragma once

#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "payne/assembly.hpp"
#include "payne/linalg.hpp"
#include "payne/mesh.hpp"

namespace payne {

enum class Problem { dirichlet, neumann, buckling, navier };

std::string to_string(Problem p);
Problem parse_problem(const std::string& name);

/// Sorted eigenvalues of one problem on one discretization. `vectors`, when present, are
/// full-length DOF vectors (zero on constrained DOFs), one column per value.
struct Spectrum {
  Problem problem = Problem::dirichlet;
  std::vector<double> values;
  Matrix vectors;
  std::string descriptor;  // mesh hash, grid description, or "disk-oracle"
  int order = 0;           // Lagrange order; 0 for Morley and for oracles

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Groups of values whose relative spread is below rel_tol; returns the group sizes.
std::vector<int> multiplicities(const std::vector<double>& values, double rel_tol);

enum class LaplaceBC { dirichlet, neumann };

Spectrum laplace_spectrum(const Mesh& mesh, LaplaceBC bc, int order, int k);
Spectrum laplace_spectrum(const Mesh& mesh, const OperatorPair& pair, LaplaceBC bc, int k);

/// Clamped pencil (A_bend, K_grad) on the Morley space.
Spectrum buckling_spectrum(const Mesh& mesh, int k);
Spectrum buckling_spectrum(const Mesh& mesh, const OperatorPair& morley, int k);

/// Pencil (A_bend, K_grad) with only the boundary vertex values constrained.
Spectrum navier_spectrum(const Mesh& mesh, int k);
Spectrum navier_spectrum(const Mesh& mesh, const OperatorPair& morley, int k);

/// All eigenvalues <= upper of the pencil restricted to `free` DOFs.
std::vector<double> pencil_values_below(const SparseMatrix& A, const SparseMatrix& B,
                                        const std::vector<int>& free, double upper);

/// Analytic unit-disk spectra scaled by 1/radius^2. Roots by bracketing on a 0.1 grid and
/// bisection to 1e-12. Throws RangeError past the tabulated range (Bessel argument <= 40).
Spectrum disk_oracle(Problem problem, int count, double radius = 1.0);

struct CountResult {
  int count = 0;
  bool ambiguous = false;  // lambda within 1e-9 relative of a value
};

/// #{values < lambda}.
CountResult counting_function(const Spectrum& s, double lambda);
CountResult counting_function(const std::vector<double>& values, double lambda);

/// CSV rows `index,value,problem,mesh_hash`, index 1-based.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);

/// Write-once cache keyed by (descriptor, problem, order, k). Reads are shared.
class SpectrumCache {
public:
  template <class Compute>
  Spectrum get_or_compute(const std::string& descriptor, Problem problem, int order, int k, Compute&& compute) {
    const Key key{descriptor, problem, order, k};
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    Spectrum s = compute();
    std::lock_guard lock(mutex_);
    return entries_.try_emplace(key, std::move(s)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

private:
  using Key = std::tuple<std::string, Problem, int, int>;
  mutable std::mutex mutex_;
  std::map<Key, Spectrum> entries_;
};

}  // namespace payne
