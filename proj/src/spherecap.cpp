#include "payne/spherecap.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include <Eigen/Dense>

#include "payne/errors.hpp"

namespace payne {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kTieTolerance = 1e-6;

struct Gauss {
  std::array<double, 8> x{};  // on [0, 1]
  std::array<double, 8> w{};
};

const Gauss& gauss8() {
  static const Gauss g = [] {
    Gauss out;
    constexpr int n = 8;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      out.x[i] = 0.5 * (1.0 - z);
      out.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)p'^2) scaled by 1/2
    }
    return out;
  }();
  return g;
}

// Local functionals (t position, derivative order) and the global numbering of one element type.
struct ElementLayout {
  std::vector<std::pair<double, int>> functionals;
  int per_node = 1;      // DOFs at each grid node
  int per_interior = 0;  // DOFs inside each interval
};

ElementLayout layout(CapElement e) {
  ElementLayout l;
  switch (e) {
    case CapElement::lagrange2:
      l.functionals = {{0.0, 0}, {0.5, 0}, {1.0, 0}};
      l.per_node = 1;
      l.per_interior = 1;
      break;
    case CapElement::hermite3:
      l.functionals = {{0.0, 0}, {0.0, 1}, {1.0, 0}, {1.0, 1}};
      l.per_node = 2;
      break;
    case CapElement::hermite5:
      l.functionals = {{0.0, 0}, {0.0, 1}, {0.0, 2}, {1.0, 0}, {1.0, 1}, {1.0, 2}};
      l.per_node = 3;
      break;
  }
  return l;
}

// d^k/dt^k of t^j at t
double monomial_derivative(int j, int k, double t) {
  if (k > j) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (j - i);
  return c * std::pow(t, j - k);
}

Matrix solve_subset(const Matrix& A, const Matrix& B, const std::vector<int>& free, int k, Vector* values) {
  const Matrix a = submatrix(A, free, free);
  const Matrix b = submatrix(B, free, free);
  k = std::min<int>(k, free.size());
  GeneralizedEigen e;
  if (free.size() > 800) {
    e = sparse_gen_eigs(a.sparseView(), b.sparseView(), k);
  } else {
    e = sym_gen_eigs(a, b, k, false);
  }
  *values = e.values;
  return e.vectors;
}

std::vector<double> mode_values(const CapOperators& ops, CapBC bc, int k) {
  const std::vector<int> free = ops.free_dofs(bc);
  if (free.empty()) return {};
  Vector w;
  if (ops.order == CapOrder::second) {
    solve_subset(ops.K, ops.M, free, k, &w);
  } else {
    solve_subset(ops.A, ops.K, free, k, &w);
  }
  return {w.data(), w.data() + w.size()};
}

double rel_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

template <class F>
void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<int> CapOperators::free_dofs(CapBC bc) const {
  std::vector<char> fixed(size(), 0);
  for (int i : pole_constrained) fixed[i] = 1;
  if (bc == CapBC::dirichlet || bc == CapBC::clamped) fixed[edge_value.at(0)] = 1;
  if (bc == CapBC::clamped) {
    if (edge_value.size() < 2) throw KindError("clamped edge needs a C^1 element");
    fixed[edge_value[1]] = 1;
  }
  std::vector<int> free;
  for (int i = 0; i < size(); ++i) {
    if (!fixed[i]) free.push_back(i);
  }
  return free;
}

CapOperators cap_operators(const RadialGrid& grid, int mode, CapOrder order) {
  return cap_operators(grid, mode, order, order == CapOrder::second ? CapElement::lagrange2 : CapElement::hermite3);
}

CapOperators cap_operators(const RadialGrid& grid, int mode, CapOrder order, CapElement element) {
  if (mode < 0) throw DomainError("azimuthal mode must be non-negative");
  if (order == CapOrder::fourth && element == CapElement::lagrange2) {
    throw KindError("the fourth-order form needs a Hermite element");
  }
  const int n = grid.intervals();
  if (n < 1) throw DomainError("radial grid has no intervals");
  const ElementLayout lay = layout(element);
  const int nl = static_cast<int>(lay.functionals.size());
  const int stride = lay.per_node + lay.per_interior;
  const int ndof = (n + 1) * lay.per_node + n * lay.per_interior;

  CapOperators ops;
  ops.grid = grid;
  ops.mode = mode;
  ops.order = order;
  ops.element = element;
  ops.K = Matrix::Zero(ndof, ndof);
  ops.M = Matrix::Zero(ndof, ndof);
  if (order == CapOrder::fourth) ops.A = Matrix::Zero(ndof, ndof);

  const double m2 = static_cast<double>(mode) * mode;
  const Gauss& g = gauss8();
  for (int e = 0; e < n; ++e) {
    const double a = grid.nodes[e];
    const double h = grid.nodes[e + 1] - a;
    // global index of each local functional
    std::vector<int> idx(nl);
    for (int l = 0; l < nl; ++l) {
      const auto [t, k] = lay.functionals[l];
      if (t == 0.0) idx[l] = e * stride + k;
      else if (t == 1.0) idx[l] = (e + 1) * stride + k;
      else idx[l] = e * stride + lay.per_node;
    }
    Matrix F(nl, nl);
    for (int r = 0; r < nl; ++r) {
      const auto [t, k] = lay.functionals[r];
      for (int j = 0; j < nl; ++j) F(r, j) = monomial_derivative(j, k, t) / std::pow(h, k);
    }
    const Matrix C = F.fullPivLu().inverse();  // column l: coefficients of basis l

    for (int q = 0; q < 8; ++q) {
      const double t = g.x[q];
      const double theta = a + h * t;
      const double s = std::sin(theta);
      const double w = g.w[q] * h * s;
      Vector mono0(nl), mono1(nl), mono2(nl);
      for (int j = 0; j < nl; ++j) {
        mono0(j) = monomial_derivative(j, 0, t);
        mono1(j) = monomial_derivative(j, 1, t) / h;
        mono2(j) = monomial_derivative(j, 2, t) / (h * h);
      }
      const Vector u = C.transpose() * mono0;
      const Vector du = C.transpose() * mono1;
      const Vector d2u = C.transpose() * mono2;
      const Matrix kl = w * (du * du.transpose() + (m2 / (s * s)) * (u * u.transpose()));
      const Matrix ml = w * (u * u.transpose());
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) {
          ops.K(idx[i], idx[j]) += kl(i, j);
          ops.M(idx[i], idx[j]) += ml(i, j);
        }
      }
      if (order == CapOrder::fourth) {
        const Vector L = d2u + (std::cos(theta) / s) * du - (m2 / (s * s)) * u;
        const Matrix al = w * (L * L.transpose());
        for (int i = 0; i < nl; ++i) {
          for (int j = 0; j < nl; ++j) ops.A(idx[i], idx[j]) += al(i, j);
        }
      }
    }
  }

  for (int k = 0; k < lay.per_node; ++k) ops.edge_value.push_back(k);
  const int pole = n * stride;
  if (mode >= 1) ops.pole_constrained.push_back(pole);
  // smooth functions near the pole behave like s^m, s = pi - theta: a nonzero slope there
  // is only regular for m = 1 and makes the fourth-order energy log-divergent otherwise
  if (lay.per_node >= 2 && mode != 1) ops.pole_constrained.push_back(pole + 1);
  return ops;
}

Spectrum cap_spectrum(double eps, CapBC bc, int m_max, int k, int n_intervals) {
  if (bc != CapBC::dirichlet && bc != CapBC::neumann) throw DomainError("cap spectrum needs dirichlet or neumann");
  if (m_max < 2) throw DomainError("cap spectrum needs at least modes 0..2");
  if (k < 1) throw DomainError("cap spectrum count must be positive");
  const RadialGrid grid = make_radial_grid(eps, n_intervals, Grading::geometric);
  std::vector<double> merged;
  for (int m = 0; m <= m_max; ++m) {
    const std::vector<double> w = mode_values(cap_operators(grid, m, CapOrder::second), bc, k);
    for (double x : w) {
      merged.push_back(x);
      if (m >= 1) merged.push_back(x);
    }
  }
  std::sort(merged.begin(), merged.end());
  if (static_cast<int>(merged.size()) < k) throw RangeError("requested more cap eigenvalues than the modes provide");
  merged.resize(k);
  Spectrum s;
  s.problem = bc == CapBC::dirichlet ? Problem::dirichlet : Problem::neumann;
  s.values = merged;
  s.descriptor = "cap eps=" + format_number(eps) + " n=" + std::to_string(n_intervals) + " m_max=" + std::to_string(m_max);
  s.order = 2;
  return s;
}

namespace {

std::pair<double, int> buckling_min(double eps, int m_max, int n, CapElement element) {
  const RadialGrid grid = make_radial_grid(eps, n, Grading::geometric);
  double best = std::numeric_limits<double>::infinity();
  int mode = 0;
  for (int m = 0; m <= m_max; ++m) {
    const std::vector<double> w = mode_values(cap_operators(grid, m, CapOrder::fourth, element), CapBC::clamped, 1);
    if (!w.empty() && w.front() < best) {
      best = w.front();
      mode = m;
    }
  }
  return {best, mode};
}

}  // namespace

CapBuckling cap_buckling_lambda1(double eps, int m_max, int n_intervals, CapElement element) {
  if (m_max < 0) throw DomainError("mode count must be non-negative");
  if (element == CapElement::lagrange2) throw KindError("buckling needs a Hermite element");
  CapBuckling out;
  std::tie(out.value, out.mode) = buckling_min(eps, m_max, n_intervals, element);
  out.refined_value = buckling_min(eps, m_max, 2 * n_intervals, element).first;
  out.resolution_warning = rel_change(out.value, out.refined_value) > 0.05;
  return out;
}

namespace {

struct CapValues {
  double lambda1, lambda2, mu2, Lambda1;
  int mode;
};

CapValues cap_values(double eps, int n, int m_max) {
  const Spectrum d = cap_spectrum(eps, CapBC::dirichlet, m_max, 2, n);
  const Spectrum nm = cap_spectrum(eps, CapBC::neumann, m_max, 2, n);
  const auto [b, mode] = buckling_min(eps, m_max, n, CapElement::hermite3);
  return {d[0], d[1], nm[1], b, mode};
}

}  // namespace

CapPoint cap_point(double eps, int n_intervals, int m_max, double cauchy_tol, int max_intervals) {
  CapValues coarse = cap_values(eps, n_intervals, m_max);
  int n = n_intervals;
  CapPoint p;
  p.eps = eps;
  while (true) {
    const CapValues fine = cap_values(eps, 2 * n, m_max);
    double change = 0.0;
    change = std::max(change, rel_change(coarse.lambda1, fine.lambda1));
    change = std::max(change, rel_change(coarse.lambda2, fine.lambda2));
    change = std::max(change, rel_change(coarse.mu2, fine.mu2));
    change = std::max(change, rel_change(coarse.Lambda1, fine.Lambda1));
    n *= 2;
    p.lambda1 = fine.lambda1;
    p.lambda2 = fine.lambda2;
    p.mu2 = fine.mu2;
    p.Lambda1 = fine.Lambda1;
    p.Lambda1_mode = fine.mode;
    p.intervals = n;
    p.cauchy_change = change;
    if (change < cauchy_tol) break;
    if (2 * n > max_intervals) {
      p.resolution_warning = true;
      break;
    }
    coarse = fine;
  }
  p.friedlander_fails = p.lambda1 < p.mu2;
  // the m = 0 clamped problem reduces to phi'(eps) = 0 and phi' is an m = 1 Dirichlet mode,
  // so Lambda1 and lambda2 can coincide exactly; only a clear gap counts as failure
  p.payne_tie = rel_change(p.Lambda1, p.lambda2) <= kTieTolerance;
  p.payne_fails = p.Lambda1 < p.lambda2 && !p.payne_tie;
  return p;
}

FitResult linear_fit(const std::string& model, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit series lengths differ");
  FitResult f;
  f.model = model;
  f.points = static_cast<int>(x.size());
  f.intercept = f.slope = f.rms_residual = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.rms_residual = std::sqrt(rss / n);
  return f;
}

CapScan cap_scan(const std::vector<double>& eps_list, int n_intervals, int m_max, int threads) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || !(eps_list[i] <= kMaxCapRadius)) {
      throw PreconditionError("cap radius " + format_number(eps_list[i]) + " outside (0, pi/2]");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw PreconditionError("eps list must be strictly decreasing");
  }
  CapScan out;
  out.sweep.parameter = "eps";
  out.sweep.grid = eps_list;
  out.sweep.columns = {"eps", "lambda1", "lambda2", "mu2", "Lambda1", "friedlander_fails", "payne_fails",
                       "resolution_warning"};
  const int n = static_cast<int>(eps_list.size());
  std::vector<std::optional<CapPoint>> points(n);
  std::vector<std::string> errors(n);
  parallel_for(n, threads, [&](int i) {
    try {
      points[i] = cap_point(eps_list[i], n_intervals, m_max);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  bool all_friedlander_small = true;
  bool any_warning = false;
  std::vector<double> x, l1, big;
  for (int i = 0; i < n; ++i) {
    SweepResult::Record rec;
    rec.parameter = eps_list[i];
    if (!points[i]) {
      rec.error = errors[i];
      out.sweep.records.push_back(rec);
      continue;
    }
    const CapPoint& p = *points[i];
    rec.cells = {format_number(p.eps),     format_number(p.lambda1),     format_number(p.lambda2),
                 format_number(p.mu2),     format_number(p.Lambda1),     format_flag(p.friedlander_fails),
                 format_flag(p.payne_fails), format_flag(p.resolution_warning)};
    out.sweep.records.push_back(rec);
    out.points.push_back(p);
    if (p.eps <= 0.1 && !p.friedlander_fails) all_friedlander_small = false;
    any_warning = any_warning || p.resolution_warning;
    x.push_back(1.0 / std::log(1.0 / p.eps));
    l1.push_back(p.lambda1);
    big.push_back(p.Lambda1);
  }
  out.sweep.summary["friedlander_fails_small_eps"] = all_friedlander_small;
  out.sweep.summary["resolution_warning"] = any_warning;

  out.fits.push_back(linear_fit("lambda1 = a + b/log(1/eps)", x, l1));
  out.fits.push_back(linear_fit("Lambda1 = a + b/log(1/eps)", x, big));
  std::vector<double> le, lb;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (out.points[i].Lambda1 > 0) {
      le.push_back(std::log(out.points[i].eps));
      lb.push_back(std::log(out.points[i].Lambda1));
    }
  }
  out.fits.push_back(linear_fit("log Lambda1 = a + b log eps", le, lb));
  return out;
}

}  // namespace payne
