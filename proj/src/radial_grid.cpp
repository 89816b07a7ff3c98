#include "payne/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "payne/errors.hpp"

namespace payne {

RadialGrid make_radial_grid(double eps, int n, Grading grading, double max_ratio) {
  constexpr double pi = std::numbers::pi;
  if (!(eps > 0.0) || !(eps <= kMaxCapRadius)) throw DomainError("cap radius eps must lie in (0, pi/2]");
  if (n < 8) throw DomainError("radial grid needs at least 8 intervals");
  if (!(max_ratio > 1.0)) throw DomainError("grading ratio must exceed 1");

  RadialGrid grid;
  grid.theta_min = eps;
  grid.theta_max = pi;
  grid.nodes.resize(static_cast<std::size_t>(n) + 1);
  const double length = pi - eps;

  if (grading == Grading::uniform) {
    for (int i = 0; i <= n; ++i) grid.nodes[i] = eps + length * i / n;
  } else {
    const double q = std::min(max_ratio, std::pow(pi / eps, 1.0 / n));
    const double first = length * (q - 1.0) / (std::pow(q, n) - 1.0);
    double theta = eps;
    double width = first;
    grid.nodes[0] = eps;
    for (int i = 1; i < n; ++i) {
      theta += width;
      grid.nodes[i] = theta;
      width *= q;
    }
  }
  grid.nodes.front() = eps;
  grid.nodes.back() = pi;
  return grid;
}

}  // namespace payne
