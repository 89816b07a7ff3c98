#pragma once

#include <string>
#include <vector>

#include "payne/linalg.hpp"
#include "payne/radial_grid.hpp"
#include "payne/spectra.hpp"
#include "payne/sweep.hpp"

namespace payne {

// Azimuthal mode m of the sphere minus the cap {theta < eps}, colatitude theta in [eps, pi].

enum class CapOrder { second, fourth };
enum class CapElement {
  lagrange2,  // second-order forms
  hermite3,   // C^1, (u, u') per node
  hermite5,   // C^2, (u, u', u'') per node
};
enum class CapBC { none, dirichlet, neumann, clamped };

struct CapOperators {
  RadialGrid grid;
  int mode = 0;
  CapOrder order = CapOrder::second;
  CapElement element = CapElement::lagrange2;
  Matrix K;  // int (u'v' + m^2 uv / sin^2) sin
  Matrix M;  // int uv sin
  Matrix A;  // int (L_m u)(L_m v) sin, L_m u = u'' + cot u' - m^2 u / sin^2; fourth order only
  std::vector<int> edge_value;       // DOFs at theta = eps by derivative order
  std::vector<int> pole_constrained; // regularity constraints at theta = pi

  int size() const { return static_cast<int>(K.rows()); }
  /// Free DOFs after the edge condition and the pole rules.
  std::vector<int> free_dofs(CapBC bc) const;
};

/// Default elements: lagrange2 for second order, hermite3 for fourth order.
CapOperators cap_operators(const RadialGrid& grid, int mode, CapOrder order);
CapOperators cap_operators(const RadialGrid& grid, int mode, CapOrder order, CapElement element);

inline constexpr int kDefaultCapIntervals = 200;
inline constexpr int kDefaultCapModes = 4;

/// Per-mode spectra merged, modes m >= 1 doubled. bc is dirichlet or neumann.
Spectrum cap_spectrum(double eps, CapBC bc, int m_max, int k, int n_intervals = kDefaultCapIntervals);

struct CapBuckling {
  double value = 0.0;
  int mode = 0;
  double refined_value = 0.0;  // same at doubled intervals
  bool resolution_warning = false;  // relative change > 5%
};

CapBuckling cap_buckling_lambda1(double eps, int m_max, int n_intervals = kDefaultCapIntervals,
                                 CapElement element = CapElement::hermite3);

struct CapPoint {
  double eps = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, mu2 = 0.0, Lambda1 = 0.0;
  int Lambda1_mode = 0;
  int intervals = 0;          // resolution the values were taken at
  double cauchy_change = 0.0; // max relative change against half the intervals
  bool friedlander_fails = false;  // lambda1 < mu2
  bool payne_fails = false;        // Lambda1 < lambda2 by more than a 1e-6 relative tie
  bool payne_tie = false;
  bool resolution_warning = false;
};

/// Doubles the interval count from n_intervals until every quantity changes by less than
/// `cauchy_tol`, up to max_intervals.
CapPoint cap_point(double eps, int n_intervals, int m_max, double cauchy_tol = 0.01, int max_intervals = 3200);

struct FitResult {
  std::string model;
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
  int points = 0;
};

/// y = a + b x by least squares.
FitResult linear_fit(const std::string& model, const std::vector<double>& x, const std::vector<double>& y);

struct CapScan {
  SweepResult sweep;  // columns eps,lambda1,lambda2,mu2,Lambda1,friedlander_fails,payne_fails,resolution_warning
  std::vector<CapPoint> points;
  std::vector<FitResult> fits;  // descriptive only
};

/// PreconditionError unless eps_list is strictly decreasing inside (0, pi/2].
CapScan cap_scan(const std::vector<double>& eps_list, int n_intervals = kDefaultCapIntervals,
                 int m_max = kDefaultCapModes, int threads = 1);

}  // namespace payne
