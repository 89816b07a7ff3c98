#include "payne/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "payne/errors.hpp"

namespace payne {

namespace {

void require_symmetric(const Matrix& A, const char* name) {
  if (A.rows() != A.cols()) throw DomainError(std::string(name) + " must be square");
  if (asymmetry(A) > 1e-10) throw DomainError(std::string(name) + " is not symmetric");
}

double inf_norm(const Matrix& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().rowwise().sum().maxCoeff();
}

// C = L^{-1} A L^{-T} with B = L L^T, reduced to tridiagonal form C = Q T Q^T.
struct ReducedPencil {
  Eigen::LLT<Matrix> cholesky;
  Eigen::Tridiagonalization<Matrix> tridiagonal;
  Vector eigenvalues;  // of T, ascending
};

void reduce(const Matrix& A, const Matrix& B, ReducedPencil& out) {
  require_symmetric(A, "A");
  require_symmetric(B, "B");
  if (A.rows() != B.rows()) throw DomainError("pencil matrices differ in size");
  if (A.rows() == 0) throw DomainError("eigenproblem on an empty space");
  out.cholesky.compute(B);
  if (out.cholesky.info() != Eigen::Success) throw FactorizationError("B is not positive definite");
  const auto L = out.cholesky.matrixL();
  const Matrix half = L.solve(A);  // L^{-1} A
  Matrix C = L.solve(half.transpose());
  C = 0.5 * (C + C.transpose()).eval();
  out.tridiagonal.compute(C);
  // computeFromTridiagonal does not rescale; unscaled input can stall the QR sweep
  const Vector diag = out.tridiagonal.diagonal();
  const Vector sub = out.tridiagonal.subDiagonal();
  double scale = diag.size() ? diag.cwiseAbs().maxCoeff() : 0.0;
  if (sub.size()) scale = std::max(scale, sub.cwiseAbs().maxCoeff());
  if (!(scale > 0.0)) scale = 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> qr;
  qr.computeFromTridiagonal(diag / scale, sub / scale, Eigen::EigenvaluesOnly);
  if (qr.info() != Eigen::Success) throw FactorizationError("tridiagonal QR iteration did not converge");
  out.eigenvalues = qr.eigenvalues() * scale;
}

// LU with partial pivoting of the tridiagonal T - shift I (the dgttrf/dgttrs scheme).
class TridiagonalLU {
public:
  TridiagonalLU(const Vector& diag, const Vector& sub, double shift, double pivot_floor) {
    const int n = static_cast<int>(diag.size());
    d_ = diag.array() - shift;
    du_ = Vector::Zero(std::max(n - 1, 0));
    du2_ = Vector::Zero(std::max(n - 2, 0));
    dl_ = Vector::Zero(std::max(n - 1, 0));
    swap_.assign(std::max(n - 1, 0), false);
    Vector lower = sub;
    if (n > 1) du_ = sub;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(d_(i)) >= std::abs(lower(i))) {
        if (d_(i) == 0.0) d_(i) = pivot_floor;
        const double f = lower(i) / d_(i);
        dl_(i) = f;
        d_(i + 1) -= f * du_(i);
      } else {
        const double f = d_(i) / lower(i);
        d_(i) = lower(i);
        dl_(i) = f;
        const double t = du_(i);
        du_(i) = d_(i + 1);
        d_(i + 1) = t - f * d_(i + 1);
        if (i + 2 < n) {
          du2_(i) = du_(i + 1);
          du_(i + 1) = -f * du2_(i);
        }
        swap_[i] = true;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(d_(i)) < pivot_floor) d_(i) = d_(i) < 0.0 ? -pivot_floor : pivot_floor;
    }
  }

  void solve(Vector& b) const {
    const int n = static_cast<int>(d_.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (!swap_[i]) {
        b(i + 1) -= dl_(i) * b(i);
      } else {
        const double t = b(i);
        b(i) = b(i + 1);
        b(i + 1) = t - dl_(i) * b(i + 1);
      }
    }
    b(n - 1) /= d_(n - 1);
    if (n > 1) b(n - 2) = (b(n - 2) - du_(n - 2) * b(n - 1)) / d_(n - 2);
    for (int i = n - 3; i >= 0; --i) b(i) = (b(i) - du_(i) * b(i + 1) - du2_(i) * b(i + 2)) / d_(i);
  }

private:
  Vector d_, du_, du2_, dl_;
  std::vector<bool> swap_;
};

// Eigenvectors of the tridiagonal matrix for the given ascending eigenvalues by inverse
// iteration; members of a cluster are reorthogonalized against each other.
Matrix tridiagonal_eigenvectors(const Vector& diag, const Vector& sub, const Vector& values) {
  const int n = static_cast<int>(diag.size());
  const int k = static_cast<int>(values.size());
  double tnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::abs(diag(i));
    if (i > 0) row += std::abs(sub(i - 1));
    if (i + 1 < n) row += std::abs(sub(i));
    tnorm = std::max(tnorm, row);
  }
  tnorm = std::max(tnorm, std::numeric_limits<double>::min());
  const double eps = std::numeric_limits<double>::epsilon();
  const double cluster_gap = 1e-3 * tnorm;

  Matrix Y(n, k);
  int cluster_begin = 0;
  double previous_shift = 0.0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  for (int j = 0; j < k; ++j) {
    if (j > 0 && values(j) - values(j - 1) > cluster_gap) cluster_begin = j;
    double shift = values(j);
    if (j > cluster_begin) shift = std::max(shift, previous_shift + 10.0 * eps * tnorm);
    previous_shift = shift;

    TridiagonalLU lu(diag, sub, shift, eps * tnorm);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
      seed = seed * 6364136223846793005ull + 1442695040888963407ull;
      y(i) = static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
    }
    for (int iter = 0; iter < 5; ++iter) {
      y.normalize();
      lu.solve(y);
      for (int c = cluster_begin; c < j; ++c) y -= Y.col(c).dot(y) * Y.col(c);
    }
    Y.col(j) = y.normalized();
  }
  return Y;
}

}  // namespace

Inertia operator+(const Inertia& a, const Inertia& b) {
  return {a.n_neg + b.n_neg, a.n_zero + b.n_zero, a.n_pos + b.n_pos, a.zero_tol};
}

double asymmetry(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (A - A.transpose()).cwiseAbs().maxCoeff() / scale;
}

GeneralizedEigen sym_gen_eigs(const Matrix& A, const Matrix& B, int k, bool want_vectors) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) throw DomainError("eigenproblem on an empty space");
  if (k < 1 || k > n) {
    throw DomainError("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(n) +
                      "-dimensional pencil");
  }
  ReducedPencil reduced;
  reduce(A, B, reduced);

  GeneralizedEigen result;
  result.values = reduced.eigenvalues.head(k);
  if (want_vectors) {
    const Vector diag = reduced.tridiagonal.diagonal();
    const Vector sub = reduced.tridiagonal.subDiagonal();
    Matrix V = reduced.tridiagonal.matrixQ() * tridiagonal_eigenvectors(diag, sub, result.values);
    // x = L^{-T} v
    result.vectors = reduced.cholesky.matrixU().solve(V);
  }
  return result;
}

GeneralizedEigen sparse_gen_eigs(const SparseMatrix& A, const SparseMatrix& B, int k) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) throw DomainError("eigenproblem on an empty space");
  if (k < 1 || k > n) {
    throw DomainError("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(n) +
                      "-dimensional pencil");
  }
  const int p = std::min(n, std::max(2 * k, k + 12));
  if (p >= n / 2) return sym_gen_eigs(Matrix(A), Matrix(B), k);

  Eigen::SimplicialLLT<SparseMatrix> bfac(B);
  if (bfac.info() != Eigen::Success) throw FactorizationError("B is not positive definite");

  // A + |sigma| B is SPD when A is semidefinite
  const double sigma = -1e-4 * A.diagonal().sum() / B.diagonal().sum();
  SparseMatrix shifted = A - sigma * B;
  Eigen::SimplicialLDLT<SparseMatrix> op(shifted);
  if (op.info() != Eigen::Success) throw FactorizationError("factorization of the shifted pencil failed");

  const double a_scale = std::max(A.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double b_scale = B.diagonal().cwiseAbs().maxCoeff();
  Matrix X(n, p);
  std::uint64_t seed = 0x2545f4914f6cdd1dull;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) {
      seed = seed * 6364136223846793005ull + 1442695040888963407ull;
      X(i, j) = static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
    }
  }

  GeneralizedEigen result;
  for (int iter = 0; iter < 500; ++iter) {
    Matrix Y = op.solve(B * X);
    Eigen::HouseholderQR<Matrix> qr(Y);
    Y = qr.householderQ() * Matrix::Identity(n, p);
    const Matrix AY = A * Y;
    const Matrix BY = B * Y;
    Matrix ar = Y.transpose() * AY;
    Matrix br = Y.transpose() * BY;
    ar = 0.5 * (ar + ar.transpose()).eval();
    br = 0.5 * (br + br.transpose()).eval();
    GeneralizedEigen small = sym_gen_eigs(ar, br, p);
    X = Y * small.vectors;

    double worst = 0.0;
    const Matrix AX = AY * small.vectors;
    const Matrix BX = BY * small.vectors;
    for (int j = 0; j < k; ++j) {
      const double lam = small.values(j);
      const double r = (AX.col(j) - lam * BX.col(j)).norm();
      worst = std::max(worst, r / ((a_scale + std::abs(lam) * b_scale) * X.col(j).norm()));
    }
    if (worst < 1e-11) {
      result.values = small.values.head(k);
      result.vectors = X.leftCols(k);
      return result;
    }
  }
  throw FactorizationError("subspace iteration did not converge");
}

Vector sym_gen_eigs_below(const Matrix& A, const Matrix& B, double upper) {
  ReducedPencil reduced;
  reduce(A, B, reduced);
  const Vector& w = reduced.eigenvalues;
  Eigen::Index count = 0;
  while (count < w.size() && w(count) <= upper) ++count;
  return w.head(count);
}

SymmetricFactorization::SymmetricFactorization(const Matrix& A) : work_(A) {
  require_symmetric(A, "matrix");
  const int n = static_cast<int>(A.rows());
  norm_ = inf_norm(A);
  perm_.resize(n);
  for (int i = 0; i < n; ++i) perm_[i] = i;
  block_size_.assign(n, 0);

  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  Matrix& W = work_;

  // Symmetric interchange of rows/columns i < j in the lower-stored active matrix.
  auto interchange = [&](int k, int i, int j) {
    if (i == j) return;
    W.row(i).head(k).swap(W.row(j).head(k));
    std::swap(W(i, i), W(j, j));
    for (int m = k; m < i; ++m) std::swap(W(i, m), W(j, m));
    for (int m = i + 1; m < j; ++m) std::swap(W(m, i), W(j, m));
    for (int m = j + 1; m < n; ++m) std::swap(W(m, i), W(m, j));
    std::swap(perm_[i], perm_[j]);
  };

  int k = 0;
  while (k < n) {
    const int rest = n - k - 1;
    double colmax = 0.0;
    int r = k;
    if (rest > 0) {
      Eigen::Index idx;
      colmax = W.col(k).tail(rest).cwiseAbs().maxCoeff(&idx);
      r = k + 1 + static_cast<int>(idx);
    }
    const double akk = std::abs(W(k, k));
    int size = 1;

    if (std::max(akk, colmax) == 0.0 || akk >= alpha * colmax) {
      size = 1;
    } else {
      // Largest off-diagonal magnitude in row/column r of the active matrix.
      double rowmax = 0.0;
      for (int j = k; j < r; ++j) rowmax = std::max(rowmax, std::abs(W(r, j)));
      for (int i = r + 1; i < n; ++i) rowmax = std::max(rowmax, std::abs(W(i, r)));
      if (akk * rowmax >= alpha * colmax * colmax) {
        size = 1;
      } else if (std::abs(W(r, r)) >= alpha * rowmax) {
        interchange(k, k, r);
        size = 1;
      } else {
        interchange(k, k + 1, r);
        size = 2;
      }
    }

    block_size_[k] = size;
    if (size == 1) {
      const double d = W(k, k);
      if (rest > 0) {
        if (d != 0.0) {
          Vector c = W.col(k).tail(rest);
          W.bottomRightCorner(rest, rest).selfadjointView<Eigen::Lower>().rankUpdate(c, -1.0 / d);
          W.col(k).tail(rest) = c / d;
        } else {
          W.col(k).tail(rest).setZero();
        }
      }
      k += 1;
    } else {
      const int m = n - k - 2;
      Eigen::Matrix2d D;
      D << W(k, k), W(k + 1, k), W(k + 1, k), W(k + 1, k + 1);
      if (m > 0) {
        Matrix C = W.block(k + 2, k, m, 2);
        Matrix L2 = C * D.inverse();
        W.bottomRightCorner(m, m).triangularView<Eigen::Lower>() -= L2 * C.transpose();
        W.block(k + 2, k, m, 2) = L2;
      }
      k += 2;
    }
  }
}

Inertia SymmetricFactorization::inertia(double zero_tol) const {
  Inertia result;
  result.zero_tol = zero_tol;
  const double threshold = zero_tol * norm_;
  auto classify = [&](double d) {
    if (std::abs(d) <= threshold) {
      ++result.n_zero;
    } else if (d < 0.0) {
      ++result.n_neg;
    } else {
      ++result.n_pos;
    }
  };
  const int n = dimension();
  for (int k = 0; k < n;) {
    if (block_size_[k] == 1) {
      classify(work_(k, k));
      k += 1;
    } else {
      const double a = work_(k, k), b = work_(k + 1, k), c = work_(k + 1, k + 1);
      const double mean = 0.5 * (a + c);
      const double radius = std::hypot(0.5 * (a - c), b);
      classify(mean - radius);
      classify(mean + radius);
      k += 2;
    }
  }
  return result;
}

Matrix SymmetricFactorization::solve(const Matrix& rhs) const {
  const int n = dimension();
  if (rhs.rows() != n) throw DomainError("right-hand side size mismatch");
  Matrix y(n, rhs.cols());
  for (int i = 0; i < n; ++i) y.row(i) = rhs.row(perm_[i]);

  // L z = y
  for (int k = 0; k < n;) {
    const int s = block_size_[k];
    const int rest = n - k - s;
    if (rest > 0) y.bottomRows(rest).noalias() -= work_.block(k + s, k, rest, s) * y.middleRows(k, s);
    k += s;
  }
  // D w = z
  for (int k = 0; k < n;) {
    if (block_size_[k] == 1) {
      y.row(k) /= work_(k, k);
      k += 1;
    } else {
      Eigen::Matrix2d D;
      D << work_(k, k), work_(k + 1, k), work_(k + 1, k), work_(k + 1, k + 1);
      y.middleRows(k, 2) = D.inverse() * y.middleRows(k, 2);
      k += 2;
    }
  }
  // L^T x = w, walking the blocks backwards
  std::vector<int> starts;
  for (int k = 0; k < n; k += block_size_[k]) starts.push_back(k);
  for (auto it = starts.rbegin(); it != starts.rend(); ++it) {
    const int k = *it;
    const int s = block_size_[k];
    const int rest = n - k - s;
    if (rest > 0) y.middleRows(k, s).noalias() -= work_.block(k + s, k, rest, s).transpose() * y.bottomRows(rest);
  }

  Matrix x(n, rhs.cols());
  for (int i = 0; i < n; ++i) x.row(perm_[i]) = y.row(i);
  return x;
}

Inertia inertia(const Matrix& A, double zero_tol) {
  if (A.rows() == 0) return Inertia{0, 0, 0, zero_tol};
  return SymmetricFactorization(A).inertia(zero_tol);
}

SchurElimination eliminate_interior(const Matrix& Q, std::span<const int> interior,
                                    std::span<const int> boundary, double zero_tol) {
  const int n = static_cast<int>(Q.rows());
  std::vector<int> seen(n, 0);
  for (int i : interior) {
    if (i < 0 || i >= n) throw DomainError("interior index out of range");
    ++seen[i];
  }
  for (int i : boundary) {
    if (i < 0 || i >= n) throw DomainError("boundary index out of range");
    ++seen[i];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw DomainError("interior and boundary index sets must partition the matrix dimension");
  }

  SchurElimination result;
  const Matrix Qbb = submatrix(Q, boundary, boundary);
  if (interior.empty()) {
    result.complement = Qbb;
    result.extension = Matrix(0, boundary.size());
    result.interior = Inertia{0, 0, 0, zero_tol};
    return result;
  }
  const Matrix Qii = submatrix(Q, interior, interior);
  const Matrix Qib = submatrix(Q, interior, boundary);
  SymmetricFactorization factor(Qii);
  result.interior = factor.inertia(zero_tol);
  if (result.interior.n_zero > 0) {
    throw ExcludedSpectrumError("interior block is singular: the spectral parameter hits an excluded eigenvalue",
                                std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  }
  result.extension = -factor.solve(Qib);
  Matrix S = Qbb + Qib.transpose() * result.extension;
  result.complement = 0.5 * (S + S.transpose());
  return result;
}

Matrix schur_complement(const Matrix& Q, std::span<const int> interior, std::span<const int> boundary,
                        double zero_tol) {
  return eliminate_interior(Q, interior, boundary, zero_tol).complement;
}

Matrix submatrix(const SparseMatrix& A, std::span<const int> rows, std::span<const int> cols) {
  std::vector<int> row_pos(A.rows(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<int>(i);
  Matrix out = Matrix::Zero(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (SparseMatrix::InnerIterator it(A, cols[j]); it; ++it) {
      const int p = row_pos[it.row()];
      if (p >= 0) out(p, j) += it.value();
    }
  }
  return out;
}

SparseMatrix sparse_submatrix(const SparseMatrix& A, std::span<const int> idx) {
  std::vector<int> pos(A.rows(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    for (SparseMatrix::InnerIterator it(A, idx[j]); it; ++it) {
      if (pos[it.row()] >= 0) entries.emplace_back(pos[it.row()], static_cast<int>(j), it.value());
    }
  }
  SparseMatrix out(idx.size(), idx.size());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Matrix submatrix(const Matrix& A, std::span<const int> rows, std::span<const int> cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) out(i, j) = A(rows[i], cols[j]);
  }
  return out;
}

}  // namespace payne
