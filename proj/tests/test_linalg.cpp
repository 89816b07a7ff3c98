#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "payne/errors.hpp"
#include "payne/linalg.hpp"

using namespace payne;

TEST_CASE("generalized eigenvalues against the Jacobi oracle") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 5, 17, 40}) {
    const Matrix A = oracle::random_symmetric(n, rng);
    const Matrix B = oracle::random_spd(n, rng);
    const auto ref = oracle::generalized_eigenvalues(A, B);
    const GeneralizedEigen ge = sym_gen_eigs(A, B, n);
    REQUIRE(ge.values.size() == n);
    for (int i = 0; i < n; ++i) CHECK(ge.values[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
    // B-orthonormal eigenvectors with small residual
    const Matrix G = ge.vectors.transpose() * B * ge.vectors;
    CHECK((G - Matrix::Identity(n, n)).norm() < 1e-9);
    const Matrix R = A * ge.vectors - B * ge.vectors * ge.values.asDiagonal();
    CHECK(R.norm() < 1e-8 * (A.norm() + 1.0));
  }
}

TEST_CASE("partial spectra and values below a threshold") {
  std::mt19937_64 rng(11);
  const Matrix A = oracle::random_symmetric(30, rng);
  const Matrix B = oracle::random_spd(30, rng);
  const auto ref = oracle::generalized_eigenvalues(A, B);
  const GeneralizedEigen four = sym_gen_eigs(A, B, 4, false);
  CHECK(four.values.size() == 4);
  CHECK(four.vectors.size() == 0);
  for (int i = 0; i < 4; ++i) CHECK(four.values[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  const double cut = 0.5 * (ref[9] + ref[10]);
  CHECK(sym_gen_eigs_below(A, B, cut).size() == 10);
}

TEST_CASE("sparse subspace iteration agrees with the dense solver") {
  // 1D Laplacian stiffness and mass on n interior nodes
  const int n = 1200;
  const double h = 1.0 / (n + 1);
  std::vector<Eigen::Triplet<double>> ka, ma;
  for (int i = 0; i < n; ++i) {
    ka.emplace_back(i, i, 2.0 / h);
    ma.emplace_back(i, i, 4.0 * h / 6.0);
    if (i + 1 < n) {
      ka.emplace_back(i, i + 1, -1.0 / h);
      ka.emplace_back(i + 1, i, -1.0 / h);
      ma.emplace_back(i, i + 1, h / 6.0);
      ma.emplace_back(i + 1, i, h / 6.0);
    }
  }
  SparseMatrix K(n, n), M(n, n);
  K.setFromTriplets(ka.begin(), ka.end());
  M.setFromTriplets(ma.begin(), ma.end());
  const GeneralizedEigen ge = sparse_gen_eigs(K, M, 5);
  REQUIRE(ge.values.size() == 5);
  for (int k = 1; k <= 5; ++k) {
    // exact linear-element eigenvalues of the uniform mesh
    const double s = std::sin(k * M_PI * h / 2.0);
    const double exact = 12.0 / (h * h) * s * s / (3.0 - 2.0 * s * s);
    CHECK(ge.values[k - 1] == doctest::Approx(exact).epsilon(1e-9));
  }
  const Matrix R = Matrix(K * ge.vectors) - Matrix(M * ge.vectors) * ge.values.asDiagonal();
  CHECK(R.norm() < 1e-6);
}

TEST_CASE("solver errors") {
  Matrix A = Matrix::Identity(3, 3);
  Matrix B = Matrix::Identity(3, 3);
  B(2, 2) = -1.0;
  CHECK_THROWS_AS(sym_gen_eigs(A, B, 2), FactorizationError);
  CHECK_THROWS_AS(sym_gen_eigs(A, Matrix::Identity(3, 3), 4), DomainError);
  A(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_gen_eigs(A, Matrix::Identity(3, 3), 2), DomainError);
}

TEST_CASE("inertia matches the eigenvalue count on random matrices") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix A = oracle::random_symmetric(100, rng);
    const auto ev = oracle::jacobi_eigenvalues(A);
    const Inertia in = inertia(A);
    CHECK(in.n_neg == oracle::count_below(ev, 0.0));
    CHECK(in.n_zero == 0);
    CHECK(in.dimension() == 100);
  }
}

TEST_CASE("inertia sees exact zeros and 2x2 pivots") {
  Matrix A(3, 3);
  A << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  const Inertia in = inertia(A);
  CHECK(in.n_neg == 1);
  CHECK(in.n_zero == 1);
  CHECK(in.n_pos == 1);
  Matrix P = Matrix::Zero(4, 4);
  P(0, 3) = P(3, 0) = 2.0;
  P(1, 2) = P(2, 1) = -3.0;
  CHECK(inertia(P) == Inertia{2, 0, 2});
}

TEST_CASE("factorization solves indefinite systems") {
  std::mt19937_64 rng(5);
  const Matrix A = oracle::random_symmetric(25, rng);
  const Matrix X = Matrix::Random(25, 3);
  const SymmetricFactorization f(A);
  CHECK((f.solve(A * X) - X).norm() < 1e-9 * X.norm());
}

TEST_CASE("Haynsworth additivity on random indefinite matrices") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(4, 40);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = dim(rng);
    const int ni = n / 2 + trial % 3;
    const Matrix Q = oracle::random_symmetric(n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> interior(perm.begin(), perm.begin() + ni), boundary(perm.begin() + ni, perm.end());
    std::sort(interior.begin(), interior.end());
    std::sort(boundary.begin(), boundary.end());
    const SchurElimination s = eliminate_interior(Q, interior, boundary);
    CHECK(inertia(Q) == s.interior + inertia(s.complement));
    // oracle check of the pieces
    CHECK(s.interior.n_neg == oracle::count_below(oracle::jacobi_eigenvalues(submatrix(Q, interior, interior)), 0.0));
    const Matrix direct = submatrix(Q, boundary, boundary) -
                          submatrix(Q, boundary, interior) * submatrix(Q, interior, interior).inverse() *
                              submatrix(Q, interior, boundary);
    CHECK((s.complement - direct).norm() < 1e-8 * (1.0 + direct.norm()));
  }
}

TEST_CASE("schur elimination argument checks") {
  const Matrix Q = Matrix::Identity(4, 4);
  const std::vector<int> i = {0, 1}, b = {2};
  CHECK_THROWS_AS(eliminate_interior(Q, i, b), DomainError);
  Matrix S = Matrix::Identity(3, 3);
  S(0, 0) = 0.0;
  const std::vector<int> i2 = {0}, b2 = {1, 2};
  CHECK_THROWS_AS(eliminate_interior(S, i2, b2), ExcludedSpectrumError);
}
