#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace payne {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr double kDefaultZeroTol = 1e-9;

struct Inertia {
  int n_neg = 0;
  int n_zero = 0;
  int n_pos = 0;
  double zero_tol = kDefaultZeroTol;

  int dimension() const { return n_neg + n_zero + n_pos; }
  bool operator==(const Inertia& o) const {
    return n_neg == o.n_neg && n_zero == o.n_zero && n_pos == o.n_pos;
  }
};

Inertia operator+(const Inertia& a, const Inertia& b);

struct GeneralizedEigen {
  Vector values;   // ascending
  Matrix vectors;  // B-orthonormal columns; empty when not requested
};

/// k smallest eigenpairs of A x = gamma B x (Cholesky reduction, Householder tridiagonalization,
/// implicit QR for values and inverse iteration for vectors).
/// Throws FactorizationError if B is not SPD, DomainError if k > dim or A is not symmetric.
GeneralizedEigen sym_gen_eigs(const Matrix& A, const Matrix& B, int k, bool want_vectors = true);

/// k smallest eigenpairs of a sparse pencil with A positive semidefinite and B SPD, by
/// shift-invert block subspace iteration. Same errors as sym_gen_eigs.
GeneralizedEigen sparse_gen_eigs(const SparseMatrix& A, const SparseMatrix& B, int k);

/// Every eigenvalue of the pencil (A, B) that is <= upper, ascending.
Vector sym_gen_eigs_below(const Matrix& A, const Matrix& B, double upper);

/// Bunch-Kaufman LDL^T with 1x1 and 2x2 pivots: P A P^T = L D L^T.
class SymmetricFactorization {
public:
  explicit SymmetricFactorization(const Matrix& A);

  int dimension() const { return static_cast<int>(work_.rows()); }
  /// Sylvester inertia from D; |d| < zero_tol * ||A||_inf counts as zero.
  Inertia inertia(double zero_tol = kDefaultZeroTol) const;
  /// Solves A X = B. Meaningful only when inertia().n_zero == 0.
  Matrix solve(const Matrix& rhs) const;

private:
  Matrix work_;  // lower triangle: L below the (block) diagonal, D on it
  std::vector<int> perm_;
  std::vector<int> block_size_;  // 1 or 2 at the first row of each pivot block, 0 inside
  double norm_ = 0.0;
};

Inertia inertia(const Matrix& A, double zero_tol = kDefaultZeroTol);

struct SchurElimination {
  Matrix complement;    // Q_bb - Q_bi Q_ii^{-1} Q_ib
  Matrix extension;     // -Q_ii^{-1} Q_ib, maps boundary data to interior values
  Inertia interior;     // inertia of Q_ii
};

/// Eliminates the interior block. Throws ExcludedSpectrumError when Q_ii is singular to
/// zero_tol; DomainError when the index sets do not partition the dimension.
SchurElimination eliminate_interior(const Matrix& Q, std::span<const int> interior,
                                    std::span<const int> boundary, double zero_tol = kDefaultZeroTol);

Matrix schur_complement(const Matrix& Q, std::span<const int> interior, std::span<const int> boundary,
                        double zero_tol = kDefaultZeroTol);

/// Dense copy of the rows x cols block of a sparse or dense symmetric matrix.
Matrix submatrix(const SparseMatrix& A, std::span<const int> rows, std::span<const int> cols);
Matrix submatrix(const Matrix& A, std::span<const int> rows, std::span<const int> cols);
SparseMatrix sparse_submatrix(const SparseMatrix& A, std::span<const int> idx);

/// max |A - A^T| relative to max |A|.
double asymmetry(const Matrix& A);

}  // namespace payne
