#include "payne/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "payne/errors.hpp"

namespace payne {

namespace {

double series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double q = half * half;
  for (int s = 0; s < 200; ++s) {
    term *= -q / ((s + 1.0) * (s + 1.0 + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && s > half) break;
  }
  return sum;
}

double miller(int m, double x) {
  const int start = 2 * ((std::max(m, static_cast<int>(x)) + 40) / 2);
  double next = 0.0;      // J_{k+1}
  double current = 1e-30; // J_k
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k == m) wanted = current;
    if (k % 2 == 0) norm += 2.0 * current;
    const double prev = 2.0 * k / x * current - next;
    next = current;
    current = prev;
    if (std::abs(current) > 1e250) {
      next *= 1e-250;
      current *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += current;  // J_0 term
  if (m == 0) wanted = current;
  return wanted / norm;
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0) throw DomainError("Bessel order must be non-negative");
  if (x < 0.0) throw DomainError("Bessel argument must be non-negative");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  return x <= 12.0 ? series(m, x) : miller(m, x);
}

double bessel_j_derivative(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

std::vector<double> bracket_roots(const std::function<double(double)>& f, double x_begin, double x_end,
                                  double step, double tol) {
  std::vector<double> roots;
  double a = x_begin;
  double fa = f(a);
  const int steps = static_cast<int>(std::ceil((x_end - x_begin) / step));
  for (int i = 1; i <= steps; ++i) {
    const double b = std::min(x_begin + i * step, x_end);
    const double fb = f(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

}  // namespace payne
