#pragma once

#include <functional>
#include <vector>

namespace payne {

/// J_m(x) for integer m >= 0 and x >= 0: ascending series for x <= 12,
/// Miller's downward recurrence beyond.
double bessel_j(int m, double x);

/// J'_m(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, with J'_0 = -J_1.
double bessel_j_derivative(int m, double x);

/// Sign changes of f on a uniform grid of step `step` over (x_begin, x_end], each refined
/// by bisection until the bracket is shorter than `tol`.
std::vector<double> bracket_roots(const std::function<double(double)>& f, double x_begin, double x_end,
                                  double step = 0.1, double tol = 1e-12);

}  // namespace payne
