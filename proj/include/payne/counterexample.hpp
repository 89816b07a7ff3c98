#pragma once

#include <iosfwd>
#include <vector>

#include "payne/assembly.hpp"
#include "payne/mesh.hpp"

namespace payne {

struct GroundState {
  Vector u1;        // full Morley vector, zero on clamped DOFs, u1^T K_grad u1 = 1
  double Lambda1 = 0.0;
};

GroundState buckling_ground_state(const Mesh& mesh, const OperatorPair& morley);
GroundState buckling_ground_state(const Mesh& mesh);

/// u1^T A_bend u1 - lambda u1^T K_grad u1.
double alpha_value(const GroundState& g, const OperatorPair& morley, double lambda);

/// Minimal bending energy subject to zero boundary values and unit boundary normal DOFs.
Vector make_perturbation(const Mesh& mesh, const OperatorPair& morley);

struct QuotientSample {
  double eps = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double quotient = 0.0;       // +-infinity when the denominator is below 1e-14
  bool infinite = false;
};

/// Quotient on the discrete H^2 with zero boundary values; ConstraintError otherwise.
QuotientSample rayleigh_quotient(const Vector& v, double lambda, const OperatorPair& morley);

struct DivergenceReport {
  double lambda = 0.0;
  double Lambda1 = 0.0;
  double alpha = 0.0;
  double alpha_direct = 0.0;   // from the quadratic forms, for the two-way check
  double perimeter = 0.0;
  double cross_term = 0.0;     // u1^T(A - lambda K)h
  double h_energy = 0.0;       // h^T(A - lambda K)h
  std::vector<QuotientSample> samples;  // decreasing eps
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  bool anomaly = false;        // a sample with quotient >= 0 at small eps
};

/// v_eps = u1 + eps h for each eps. PreconditionError unless lambda > Lambda1 (relative margin
/// 1e-3) and the eps list is positive and strictly decreasing.
DivergenceReport divergence_sweep(const Mesh& mesh, double lambda, const std::vector<double>& eps_list);

struct BoundedBelowReport {
  double lambda = 0.0;
  double Lambda1 = 0.0;
  double beta1 = 0.0;
  int trials = 0;
  double min_quotient = 0.0;    // over random and v_eps trials; +inf with no trials
  int violations = 0;
  Vector counterexample;         // first violating vector, empty when none
  double minimizer_residual = 0.0;  // ||(A - lambda K) v|| on interior DOFs for the lifted minimizer
  double minimizer_quotient = 0.0;
  bool passed = false;
};

/// Random trial vectors with zero boundary values, plus v_eps, against beta_1(lambda).
/// PreconditionError unless lambda < Lambda1 (relative margin 1e-3).
BoundedBelowReport bounded_below_check(const Mesh& mesh, double lambda, int trials, unsigned long long seed = 1);

void write_divergence_csv(std::ostream& os, const DivergenceReport& r);

}  // namespace payne
