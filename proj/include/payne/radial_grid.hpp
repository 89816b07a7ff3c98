#pragma once

#include <vector>

namespace payne {

enum class Grading { uniform, geometric };

/// Colatitude grid on [eps, pi] for the sphere with the polar cap {theta < eps} removed.
struct RadialGrid {
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::vector<double> nodes;
  bool pole_included = true;

  int intervals() const { return static_cast<int>(nodes.size()) - 1; }
};

inline constexpr double kDefaultMaxGradingRatio = 1.15;
// pi/2 plus slack so that a hemisphere given to 4 decimals (1.5708) is accepted
inline constexpr double kMaxCapRadius = 1.5708;

/// `n` intervals from eps to pi. Geometric grading uses the ratio
/// min(max_ratio, (pi/eps)^(1/n)), so doubling n refines the whole interval.
RadialGrid make_radial_grid(double eps, int n, Grading grading,
                            double max_ratio = kDefaultMaxGradingRatio);

}  // namespace payne
