#include "payne/counterexample.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/SparseCholesky>

#include "payne/errors.hpp"
#include "payne/spectra.hpp"
#include "payne/sweep.hpp"
#include "payne/trace.hpp"

namespace payne {

namespace {

constexpr double kDenominatorFloor = 1e-14;
constexpr double kRegimeMargin = 1e-3;

double form(const SparseMatrix& A, const Vector& x, const Vector& y) { return x.dot(A * y); }

std::string format_quotient(const QuotientSample& s) {
  if (s.infinite) return s.quotient > 0 ? "+inf" : "-inf";
  return format_number(s.quotient);
}

}  // namespace

GroundState buckling_ground_state(const Mesh& mesh, const OperatorPair& morley) {
  const Spectrum s = buckling_spectrum(mesh, morley, 1);
  GroundState g;
  g.Lambda1 = s.values.front();
  g.u1 = s.vectors.col(0);
  const double k = form(morley.K_grad, g.u1, g.u1);
  if (!(k > 0.0)) throw FactorizationError("buckling ground state has no gradient energy");
  g.u1 /= std::sqrt(k);
  if (g.u1.sum() < 0.0) g.u1 = -g.u1;
  return g;
}

GroundState buckling_ground_state(const Mesh& mesh) { return buckling_ground_state(mesh, assemble_morley(mesh)); }

double alpha_value(const GroundState& g, const OperatorPair& morley, double lambda) {
  return form(morley.A_bend, g.u1, g.u1) - lambda * form(morley.K_grad, g.u1, g.u1);
}

Vector make_perturbation(const Mesh& mesh, const OperatorPair& morley) {
  (void)mesh;
  const DofMap& dm = morley.dofmap;
  const std::vector<int> interior = classify_dofs(dm, BoundaryCondition::clamped).free;
  const std::vector<int> normals = boundary_normal_dofs(dm);
  Vector h = Vector::Zero(dm.size());
  for (int i : normals) h(i) = 1.0;
  if (interior.empty()) return h;

  const SparseMatrix Aii = sparse_submatrix(morley.A_bend, interior);
  // rhs = -A_ib * 1
  const Vector full = morley.A_bend * h;
  Vector rhs(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) rhs(i) = -full(interior[i]);
  Eigen::SimplicialLDLT<SparseMatrix> solver(Aii);
  if (solver.info() != Eigen::Success) throw MeshError("perturbation system is singular (degenerate mesh?)");
  const Vector x = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !x.allFinite()) throw MeshError("perturbation solve failed");
  for (std::size_t i = 0; i < interior.size(); ++i) h(interior[i]) = x(i);
  return h;
}

QuotientSample rayleigh_quotient(const Vector& v, double lambda, const OperatorPair& morley) {
  const DofMap& dm = morley.dofmap;
  if (dm.kind != ElementKind::morley) throw KindError("quotient needs a Morley assembly");
  if (v.size() != dm.size()) throw DomainError("vector length does not match the Morley space");
  double vmax = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < dm.size(); ++i) {
    if (dm.on_boundary[i] && dm.dofs[i].type == DofType::vertex_value && std::abs(v(i)) > 1e-12 * std::max(vmax, 1.0)) {
      throw ConstraintError("vector has a nonzero boundary vertex value at DOF " + std::to_string(i));
    }
  }
  QuotientSample s;
  s.numerator = form(morley.A_bend, v, v) - lambda * form(morley.K_grad, v, v);
  s.denominator = form(morley.B_normal, v, v);
  if (s.denominator < kDenominatorFloor) {
    s.infinite = true;
    s.quotient = s.numerator < 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  } else {
    s.quotient = s.numerator / s.denominator;
  }
  return s;
}

DivergenceReport divergence_sweep(const Mesh& mesh, double lambda, const std::vector<double>& eps_list) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw PreconditionError("eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw PreconditionError("eps values must be strictly decreasing");
  }
  const OperatorPair morley = assemble_morley(mesh);
  const GroundState g = buckling_ground_state(mesh, morley);
  if (!(lambda > g.Lambda1 * (1.0 + kRegimeMargin))) {
    throw PreconditionError("divergence needs lambda > Lambda1,h = " + format_number(g.Lambda1));
  }
  const Vector h = make_perturbation(mesh, morley);

  DivergenceReport r;
  r.lambda = lambda;
  r.Lambda1 = g.Lambda1;
  r.alpha = -(lambda - g.Lambda1) * form(morley.K_grad, g.u1, g.u1);
  r.alpha_direct = alpha_value(g, morley, lambda);
  r.perimeter = form(morley.B_normal, h, h);
  r.cross_term = form(morley.A_bend, g.u1, h) - lambda * form(morley.K_grad, g.u1, h);
  r.h_energy = form(morley.A_bend, h, h) - lambda * form(morley.K_grad, h, h);

  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    Vector v = g.u1 + eps * h;
    QuotientSample s = rayleigh_quotient(v, lambda, morley);
    s.eps = eps;
    if (s.quotient < 0.0 && !s.infinite) {
      xs.push_back(std::log(eps));
      ys.push_back(std::log(-s.quotient));
    } else if (eps <= 1e-2) {
      r.anomaly = true;
    }
    r.samples.push_back(s);
  }
  const int n = static_cast<int>(xs.size());
  r.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  r.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  if (n >= 2) {
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    r.fitted_slope = sxy / sxx;
    if (n > 2) {
      double rss = 0;
      for (int i = 0; i < n; ++i) {
        const double e = ys[i] - my - r.fitted_slope * (xs[i] - mx);
        rss += e * e;
      }
      r.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
    }
  }
  return r;
}

BoundedBelowReport bounded_below_check(const Mesh& mesh, double lambda, int trials, unsigned long long seed) {
  if (trials < 0) throw DomainError("trial count must be non-negative");
  const TraceProblem problem(mesh, TraceKind::ntl);
  const OperatorPair& morley = problem.pair();
  const GroundState g = buckling_ground_state(mesh, morley);

  BoundedBelowReport r;
  r.lambda = lambda;
  r.Lambda1 = g.Lambda1;
  r.trials = trials;
  if (!(lambda < g.Lambda1 * (1.0 - kRegimeMargin))) {
    throw PreconditionError("bounded-below regime needs lambda < Lambda1,h = " + format_number(g.Lambda1));
  }
  const TraceOperator t = problem.operator_at(lambda);
  const TraceSpectrum ts = trace_spectrum(t);
  r.beta1 = ts.beta1;

  // lifted minimizer lies in the kernel of the interior rows
  const Vector v = t.lift(ts.beta1_vector);
  const Vector res = morley.A_bend * v - lambda * (morley.K_grad * v);
  double rr = 0.0;
  for (int i : t.interior) rr += res(i) * res(i);
  r.minimizer_residual = std::sqrt(rr);
  r.minimizer_quotient = rayleigh_quotient(v, lambda, morley).quotient;

  const double bound = r.beta1 - 1e-8 * std::abs(r.beta1);
  r.min_quotient = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& x) {
    const QuotientSample s = rayleigh_quotient(x, lambda, morley);
    r.min_quotient = std::min(r.min_quotient, s.quotient);
    if (s.quotient < bound) {
      if (r.violations == 0) r.counterexample = x;
      ++r.violations;
    }
  };

  if (trials > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const std::vector<int>& free = problem.free_dofs();
    for (int k = 0; k < trials; ++k) {
      Vector x = Vector::Zero(morley.dofmap.size());
      for (int i : free) x(i) = normal(rng);
      consider(x);
    }
    const Vector h = make_perturbation(mesh, morley);
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) consider(g.u1 + eps * h);
  }
  r.passed = r.violations == 0;
  return r;
}

void write_divergence_csv(std::ostream& os, const DivergenceReport& r) {
  os << "eps,numerator,denominator,quotient\n";
  for (const auto& s : r.samples) {
    os << format_number(s.eps) << ',' << format_number(s.numerator) << ',' << format_number(s.denominator) << ','
       << format_quotient(s) << '\n';
  }
}

}  // namespace payne
