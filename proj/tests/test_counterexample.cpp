#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "payne/counterexample.hpp"
#include "payne/errors.hpp"
#include "payne/spectra.hpp"

using namespace payne;

TEST_CASE("ground state normalization") {
  const Mesh m = make_disk_mesh(1.0, 3);
  const OperatorPair p = assemble_morley(m);
  const GroundState g = buckling_ground_state(m, p);
  CHECK(g.u1.dot(p.K_grad * g.u1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.u1.dot(p.A_bend * g.u1) == doctest::Approx(g.Lambda1).epsilon(1e-10));
  CHECK(g.u1.sum() > 0.0);
  CHECK(g.Lambda1 == doctest::Approx(buckling_spectrum(m, p, 1)[0]).epsilon(1e-12));
  for (int i : classify_dofs(p.dofmap, BoundaryCondition::clamped).constrained) CHECK(g.u1[i] == 0.0);
  // alpha two ways
  CHECK(alpha_value(g, p, 20.0) == doctest::Approx(-(20.0 - g.Lambda1)).epsilon(1e-10));
}

TEST_CASE("perturbation has zero boundary values and unit normal derivatives") {
  const Mesh m = make_disk_mesh(1.0, 2);
  const OperatorPair p = assemble_morley(m);
  const Vector h = make_perturbation(m, p);
  for (int v : m.boundary_vertices()) CHECK(h[v] == 0.0);
  for (int i : boundary_normal_dofs(p.dofmap)) CHECK(h[i] == 1.0);
  CHECK(h.dot(p.B_normal * h) == doctest::Approx(m.perimeter()).epsilon(1e-12));
}

TEST_CASE("quotient markers and constraint") {
  const Mesh m = make_disk_mesh(1.0, 2);
  const OperatorPair p = assemble_morley(m);
  const GroundState g = buckling_ground_state(m, p);
  const QuotientSample inf = rayleigh_quotient(g.u1, 20.0, p);
  CHECK(inf.infinite);
  CHECK(inf.quotient == -HUGE_VAL);
  CHECK(rayleigh_quotient(g.u1, 2.0, p).quotient == HUGE_VAL);
  Vector bad = g.u1;
  bad[m.boundary_vertices().front()] = 1e-3;
  CHECK_THROWS_AS(rayleigh_quotient(bad, 2.0, p), ConstraintError);
}

TEST_CASE("divergence sweep follows the quadratic expansion") {
  const Mesh m = make_disk_mesh(1.0, 3);
  const double lambda = 20.0;
  const DivergenceReport r = divergence_sweep(m, lambda, {1e-1, 1e-2, 1e-3, 1e-4});
  CHECK(r.alpha == doctest::Approx(-(lambda - r.Lambda1)).epsilon(1e-10));
  CHECK(r.alpha == doctest::Approx(r.alpha_direct).epsilon(1e-10));
  REQUIRE(r.samples.size() == 4);
  for (const auto& s : r.samples) {
    const double num = r.alpha + 2 * s.eps * r.cross_term + s.eps * s.eps * r.h_energy;
    CHECK(s.numerator == doctest::Approx(num).epsilon(1e-9));
    CHECK(s.denominator == doctest::Approx(s.eps * s.eps * r.perimeter).epsilon(1e-9));
    CHECK(s.quotient < 0.0);
  }
  CHECK(r.fitted_slope == doctest::Approx(-2.0).epsilon(0.075));
  CHECK_FALSE(r.anomaly);
  std::ostringstream os;
  write_divergence_csv(os, r);
  CHECK(os.str().rfind("eps,numerator,denominator,quotient\n", 0) == 0);
}

TEST_CASE("divergence preconditions") {
  const Mesh m = make_disk_mesh(1.0, 2);
  CHECK_THROWS_AS(divergence_sweep(m, 5.0, {1e-1, 1e-2}), PreconditionError);
  CHECK_THROWS_AS(divergence_sweep(m, 20.0, {1e-2, 1e-1}), PreconditionError);
  CHECK_THROWS_AS(divergence_sweep(m, 20.0, {1e-1, -1e-2}), PreconditionError);
  CHECK_THROWS_AS(bounded_below_check(m, 30.0, 5), PreconditionError);
}

TEST_CASE("bounded below regime") {
  const Mesh m = make_disk_mesh(1.0, 2);
  const BoundedBelowReport r = bounded_below_check(m, 2.0, 50, 3);
  CHECK(r.passed);
  CHECK(r.violations == 0);
  CHECK(r.beta1 > 0.0);
  CHECK(r.min_quotient >= r.beta1 * (1 - 1e-9));
  CHECK(r.minimizer_residual < 1e-8);
  CHECK(r.minimizer_quotient == doctest::Approx(r.beta1).epsilon(1e-8));
  CHECK(r.counterexample.size() == 0);
  const BoundedBelowReport again = bounded_below_check(m, 2.0, 50, 3);
  CHECK(again.min_quotient == r.min_quotient);
}
