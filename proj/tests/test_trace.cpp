#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "payne/errors.hpp"
#include "payne/spectra.hpp"
#include "payne/trace.hpp"

using namespace payne;

TEST_CASE("DtN at zero is the Steklov problem") {
  const Mesh m = make_disk_mesh(1.0, 3);
  const TraceOperator t = dtn_operator(m, 2, 0.0);
  CHECK(asymmetry(t.matrix) < 1e-12);
  const Vector one = Vector::Ones(t.matrix.rows());
  CHECK((t.matrix * one).norm() < 1e-9);
  const TraceSpectrum s = trace_spectrum(t);
  // unit disk Steklov eigenvalues 0, 1, 1, 2, 2
  CHECK(std::abs(s.values[0]) < 1e-8);
  CHECK(s.values[1] == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(s.values[2] == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(s.values[3] == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(s.neg_count == 0);
}

TEST_CASE("lift solves the interior equation") {
  const Mesh m = make_disk_mesh(1.0, 2);
  const TraceOperator t = ntl_operator(m, 7.0);
  Vector g = Vector::LinSpaced(t.boundary.size(), -1.0, 2.0);
  const Vector u = t.lift(g);
  REQUIRE(u.size() == t.dof_count);
  const OperatorPair p = assemble_morley(m);
  const Vector r = p.A_bend * u - 7.0 * (p.K_grad * u);
  for (int i : t.interior) CHECK(std::abs(r[i]) < 1e-9);
  for (std::size_t j = 0; j < t.boundary.size(); ++j) CHECK(u[t.boundary[j]] == g[j]);
  // the boundary quadratic form of the lift is the trace operator
  CHECK(u.dot(r) == doctest::Approx(g.dot(t.matrix * g)).epsilon(1e-9));
}

TEST_CASE("identities with a Haynsworth cross-check") {
  const Mesh m = make_disk_mesh(1.0, 3);
  for (double lambda : {2.0, 10.0, 20.0}) {
    const IdentityReport r = verify_identity(m, IdentityKind::liu, lambda);
    CHECK(r.identity_holds);
    CHECK(r.haynsworth_holds);
    CHECK(r.neg_count == r.lhs_counting - r.rhs_counting);
  }
  const IdentityReport two = verify_identity(m, IdentityKind::liu, 20.0);
  CHECK(two.neg_count == 2);
  const IdentityReport f = verify_identity(m, IdentityKind::friedlander, 4.0);
  CHECK(f.identity_holds);
  CHECK(f.neg_count == 3);  // mu_2 = mu_3 = 3.39 and mu_1 = 0 lie below 4, lambda_1 = 5.78 does not
  const IdentityReport r = verify_identity(make_rectangle_mesh(1.0, 1.0, 8, 8), IdentityKind::friedlander, 30.0);
  CHECK(r.identity_holds);
  CHECK(r.haynsworth_holds);
}

TEST_CASE("excluded spectrum is refused") {
  const Mesh m = make_disk_mesh(1.0, 2);
  const TraceProblem p(m, TraceKind::dtn);
  const double lambda1 = p.excluded_spectrum().front();
  CHECK_THROWS_AS(p.operator_at(lambda1), ExcludedSpectrumError);
  try {
    p.operator_at(lambda1 * (1 + 1e-5));
  } catch (const ExcludedSpectrumError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(lambda1));
  }
  CHECK_NOTHROW(p.operator_at(lambda1 * 1.01));
  double shift = 0.0;
  CHECK(nudge_clear(p, lambda1, true, shift));
  CHECK(std::abs(shift) > 0.0);
  CHECK(p.interior_margin(lambda1 + shift) >= p.delta());
}

TEST_CASE("beta1 changes sign at the first eigenvalue") {
  const Mesh m = make_disk_mesh(1.0, 3);
  const TraceProblem p(m, TraceKind::ntl);
  const double l1 = p.full_spectrum().front();
  const double L1 = p.excluded_spectrum().front();
  CHECK(l1 < L1);
  CHECK(trace_spectrum(p.operator_at(0.5 * l1)).beta1 > 0.0);
  const TraceSpectrum below = trace_spectrum(p.operator_at(0.5 * (l1 + L1)));
  CHECK(below.beta1 < 0.0);
  CHECK(below.neg_count == 1);
  // beta1 vector is normalized in the boundary metric
  const TraceOperator t = p.operator_at(0.5 * (l1 + L1));
  const TraceSpectrum s = trace_spectrum(t);
  CHECK(s.beta1_vector.dot(t.boundary_mass * s.beta1_vector) == doctest::Approx(1.0));
}

TEST_CASE("scans") {
  const Mesh m = make_rectangle_mesh(1.0, 1.0, 6, 6);
  const TraceProblem p(m, TraceKind::dtn);
  const SweepResult empty = scan_identities(p, {});
  CHECK(empty.records.empty());
  CHECK(empty.flag("all_hold"));
  const auto grid = interior_grid(1.0, 80.0, 8);
  const SweepResult one = scan_identities(p, grid, 1);
  const SweepResult four = scan_identities(p, grid, 4);
  CHECK(one.flag("all_hold"));
  REQUIRE(one.records.size() + one.skips.size() == grid.size());
  REQUIRE(one.records.size() == four.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) CHECK(one.records[i].cells == four.records[i].cells);
  const SweepResult b = scan_beta1(TraceProblem(m, TraceKind::ntl), interior_grid(1.0, 30.0, 4));
  CHECK(b.columns.front() == "lambda");
  CHECK(b.records.size() == 4);
}
