#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "payne/bessel.hpp"
#include "payne/errors.hpp"
#include "payne/spectra.hpp"

using namespace payne;

namespace {

// Tabulated Bessel zeros (Abramowitz and Stegun, table 9.5).
constexpr double j01 = 2.404825557695773, j11 = 3.831705970207512, j21 = 5.135622301840683;
constexpr double jp11 = 1.841183781340659, jp21 = 3.054236928227140;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("bessel functions against tabulated values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  CHECK(bessel_j(1, 2.5) == doctest::Approx(0.4970941024642741).epsilon(1e-13));
  CHECK(bessel_j(2, 20.0) == doctest::Approx(-0.16034135192299823).epsilon(1e-11));
  CHECK(bessel_j(5, 30.0) == doctest::Approx(-0.14324029551207706).epsilon(1e-10));
  CHECK(bessel_j_derivative(0, 1.3) == doctest::Approx(-bessel_j(1, 1.3)));
  const auto roots = bracket_roots([](double x) { return bessel_j(1, x); }, 0.1, 10.5);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(j11).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(7.015586669815619).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(10.17346813506272).epsilon(1e-12));
}

TEST_CASE("disk oracle") {
  const Spectrum d = disk_oracle(Problem::dirichlet, 6);
  CHECK(d[0] == doctest::Approx(j01 * j01).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(j11 * j11).epsilon(1e-12));
  CHECK(d[2] == d[1]);
  CHECK(d[3] == doctest::Approx(j21 * j21).epsilon(1e-12));
  const Spectrum n = disk_oracle(Problem::neumann, 4);
  CHECK(n[0] == 0.0);
  CHECK(n[1] == doctest::Approx(jp11 * jp11).epsilon(1e-12));
  CHECK(n[3] == doctest::Approx(jp21 * jp21).epsilon(1e-12));
  const Spectrum b = disk_oracle(Problem::buckling, 3);
  CHECK(b[0] == doctest::Approx(j11 * j11).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(j21 * j21).epsilon(1e-12));
  CHECK(disk_oracle(Problem::dirichlet, 1, 2.0)[0] == doctest::Approx(j01 * j01 / 4.0));
  CHECK_THROWS_AS(disk_oracle(Problem::dirichlet, 500), RangeError);
}

TEST_CASE("rectangle dirichlet spectrum converges to pi^2 (m^2 + n^2)") {
  const Mesh m = make_rectangle_mesh(1.0, 1.0, 16, 16);
  const Spectrum s = laplace_spectrum(m, LaplaceBC::dirichlet, 2, 4);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(rel(s[0], 2 * pi2) < 1e-4);
  CHECK(rel(s[1], 5 * pi2) < 1e-3);
  CHECK(rel(s[2], 5 * pi2) < 1e-3);
  CHECK(rel(s[3], 8 * pi2) < 1e-3);
  // conforming elements bound from above
  CHECK(s[0] > 2 * pi2);
  const Spectrum coarse = laplace_spectrum(make_rectangle_mesh(1.0, 1.0, 8, 8), LaplaceBC::dirichlet, 2, 1);
  CHECK(rel(coarse[0], 2 * pi2) > 8 * rel(s[0], 2 * pi2));  // O(h^4) for P2
}

TEST_CASE("neumann spectrum starts at zero") {
  const Mesh m = make_rectangle_mesh(2.0, 1.0, 12, 6);
  const Spectrum s = laplace_spectrum(m, LaplaceBC::neumann, 2, 3);
  CHECK(std::abs(s[0]) < 1e-9);
  CHECK(rel(s[1], std::numbers::pi * std::numbers::pi / 4) < 1e-4);
  CHECK(s.vectors.cols() == 3);
}

TEST_CASE("disk spectra at level 3") {
  const Mesh m = make_disk_mesh(1.0, 3);
  CHECK(rel(laplace_spectrum(m, LaplaceBC::dirichlet, 2, 1)[0], j01 * j01) < 5e-3);
  CHECK(rel(laplace_spectrum(m, LaplaceBC::neumann, 2, 2)[1], jp11 * jp11) < 5e-3);
  const Spectrum b = buckling_spectrum(m, 3);
  CHECK(rel(b[0], j11 * j11) < 0.02);
  CHECK(rel(b[1], j21 * j21) < 0.03);
  const Spectrum n = navier_spectrum(m, 3);
  CHECK(rel(n[0], j01 * j01) < 0.01);
  CHECK(rel(n[1], j11 * j11) < 0.01);
}

TEST_CASE("multiplicities and counting") {
  const std::vector<double> v = {1.0, 2.0, 2.0 + 1e-9, 3.0, 3.0, 3.0};
  CHECK(multiplicities(v, 1e-6) == std::vector<int>{1, 2, 3});
  CHECK(counting_function(v, 2.5).count == 3);
  CHECK(counting_function(v, 1.0).count == 0);
  CHECK(counting_function(v, 1.0).ambiguous);
  CHECK_FALSE(counting_function(v, 1.5).ambiguous);
}

TEST_CASE("cache returns the first computed spectrum") {
  SpectrumCache cache;
  int calls = 0;
  auto make = [&] {
    ++calls;
    Spectrum s;
    s.values = {1.0, 2.0};
    return s;
  };
  cache.get_or_compute("mesh", Problem::dirichlet, 2, 2, make);
  const Spectrum again = cache.get_or_compute("mesh", Problem::dirichlet, 2, 2, make);
  CHECK(calls == 1);
  CHECK(again.values.size() == 2);
  cache.get_or_compute("mesh", Problem::neumann, 2, 2, make);
  CHECK(cache.size() == 2);
}

TEST_CASE("spectrum csv") {
  const Spectrum s = disk_oracle(Problem::dirichlet, 2);
  std::ostringstream os;
  write_spectrum_csv(os, s);
  const std::string text = os.str();
  CHECK(text.rfind("index,value,problem,mesh_hash\n", 0) == 0);
  CHECK(text.find("\n1,5.78318") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(parse_problem("navier") == Problem::navier);
  CHECK_THROWS_AS(parse_problem("robin"), DomainError);
}
