#include "payne/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "payne/errors.hpp"

namespace payne {

namespace {

double relative_distance(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// (margin, nearest value)
std::pair<double, double> nearest(const std::vector<double>& values, double lambda) {
  double best = std::numeric_limits<double>::infinity();
  double which = std::numeric_limits<double>::quiet_NaN();
  auto it = std::lower_bound(values.begin(), values.end(), lambda);
  for (auto j : {it, it == values.begin() ? it : std::prev(it)}) {
    if (j == values.end()) continue;
    const double d = relative_distance(lambda, *j);
    if (d < best) {
      best = d;
      which = *j;
    }
  }
  return {best, which};
}

int count_below(const std::vector<double>& values, double lambda) {
  return static_cast<int>(std::lower_bound(values.begin(), values.end(), lambda) - values.begin());
}

std::vector<double> all_values(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return {};
  Vector w = sym_gen_eigs_below(a, b, std::numeric_limits<double>::infinity());
  // kernel modes come back as roundoff; make them exact so relative margins see them
  const double floor = 1e-10 * w.cwiseAbs().maxCoeff();
  for (double& x : w) {
    if (std::abs(x) <= floor) x = 0.0;
  }
  return {w.data(), w.data() + w.size()};
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

std::string to_string(TraceKind k) { return k == TraceKind::dtn ? "dtn" : "ntl"; }
std::string to_string(IdentityKind k) { return k == IdentityKind::friedlander ? "friedlander" : "liu"; }

IdentityKind parse_identity_kind(const std::string& name) {
  if (name == "friedlander") return IdentityKind::friedlander;
  if (name == "liu") return IdentityKind::liu;
  throw DomainError("unknown identity kind `" + name + "`");
}

TraceKind trace_kind_for(IdentityKind kind) {
  return kind == IdentityKind::friedlander ? TraceKind::dtn : TraceKind::ntl;
}

Vector TraceOperator::lift(const Vector& boundary_values) const {
  if (boundary_values.size() != static_cast<Eigen::Index>(boundary.size())) {
    throw DomainError("boundary vector has the wrong length");
  }
  Vector full = Vector::Zero(dof_count);
  const Vector inner = extension * boundary_values;
  for (std::size_t i = 0; i < interior.size(); ++i) full(interior[i]) = inner(i);
  for (std::size_t i = 0; i < boundary.size(); ++i) full(boundary[i]) = boundary_values(i);
  return full;
}

TraceProblem::TraceProblem(const Mesh& mesh, TraceKind kind, int order, double delta)
    : kind_(kind), delta_(delta), descriptor_(mesh.hash()) {
  if (!(delta > 0.0)) throw DomainError("margin delta must be positive");
  std::vector<int> interior, boundary;
  if (kind == TraceKind::dtn) {
    if (order != 1 && order != 2) throw DomainError("Lagrange order must be 1 or 2");
    pair_ = assemble_lagrange(mesh, order);
    const int n = pair_.dofmap.size();
    for (int i = 0; i < n; ++i) {
      free_.push_back(i);
      (pair_.dofmap.on_boundary[i] ? boundary : interior).push_back(i);
    }
  } else {
    pair_ = assemble_morley(mesh);
    free_ = classify_dofs(pair_.dofmap, BoundaryCondition::navier).free;
    interior = classify_dofs(pair_.dofmap, BoundaryCondition::clamped).free;
    boundary = boundary_normal_dofs(pair_.dofmap);
  }
  if (boundary.empty()) throw MeshError("mesh has no boundary degrees of freedom");

  std::vector<int> local(pair_.dofmap.size(), -1);
  for (std::size_t i = 0; i < free_.size(); ++i) local[free_[i]] = static_cast<int>(i);
  for (int g : interior) interior_local_.push_back(local[g]);
  for (int g : boundary) boundary_local_.push_back(local[g]);

  const SparseMatrix& A = kind == TraceKind::dtn ? pair_.K_grad : pair_.A_bend;
  const SparseMatrix& B = kind == TraceKind::dtn ? pair_.M : pair_.K_grad;
  const SparseMatrix& mass = kind == TraceKind::dtn ? pair_.B_trace : pair_.B_normal;
  a_ = submatrix(A, free_, free_);
  b_ = submatrix(B, free_, free_);
  mass_ = submatrix(mass, boundary, boundary);

  interior_values_ = all_values(submatrix(a_, interior_local_, interior_local_),
                                submatrix(b_, interior_local_, interior_local_));
  full_values_ = all_values(a_, b_);
}

double TraceProblem::interior_margin(double lambda) const { return nearest(interior_values_, lambda).first; }

double TraceProblem::margin(double lambda) const {
  return std::min(nearest(interior_values_, lambda).first, nearest(full_values_, lambda).first);
}

TraceOperator TraceProblem::operator_at(double lambda) const {
  const auto [m, closest] = nearest(interior_values_, lambda);
  if (m < delta_) {
    throw ExcludedSpectrumError("lambda = " + format_number(lambda) + " is within the margin of the excluded eigenvalue " +
                                    format_number(closest),
                                lambda, closest);
  }
  const Matrix Q = a_ - lambda * b_;
  SchurElimination s;
  try {
    s = eliminate_interior(Q, interior_local_, boundary_local_);
  } catch (const ExcludedSpectrumError&) {
    throw ExcludedSpectrumError("interior block singular at lambda = " + format_number(lambda), lambda, closest);
  }
  TraceOperator t;
  t.kind = kind_;
  t.lambda = lambda;
  t.matrix = std::move(s.complement);
  t.boundary_mass = mass_;
  t.descriptor = descriptor_;
  t.margin = m;
  t.extension = std::move(s.extension);
  t.interior_inertia = s.interior;
  for (int i : interior_local_) t.interior.push_back(free_[i]);
  for (int i : boundary_local_) t.boundary.push_back(free_[i]);
  t.dof_count = pair_.dofmap.size();
  return t;
}

IdentityReport TraceProblem::identity_at(double lambda) const {
  const auto [mf, closest_full] = nearest(full_values_, lambda);
  if (mf < delta_) {
    throw ExcludedSpectrumError("lambda = " + format_number(lambda) + " is within the margin of the eigenvalue " +
                                    format_number(closest_full) + " of the full pencil",
                                lambda, closest_full);
  }
  const TraceOperator t = operator_at(lambda);
  IdentityReport r;
  r.kind = kind_ == TraceKind::dtn ? IdentityKind::friedlander : IdentityKind::liu;
  r.lambda = lambda;
  r.neg_count = inertia(t.matrix).n_neg;
  r.lhs_counting = count_below(full_values_, lambda);
  r.rhs_counting = count_below(interior_values_, lambda);
  r.identity_holds = r.neg_count == r.lhs_counting - r.rhs_counting;
  r.margin = std::min(mf, t.margin);
  r.interior_neg = t.interior_inertia.n_neg;
  r.full_neg = inertia(Matrix(a_ - lambda * b_)).n_neg;
  r.haynsworth_holds = r.full_neg == r.interior_neg + r.neg_count;
  return r;
}

TraceOperator dtn_operator(const Mesh& mesh, int order, double lambda, double delta) {
  return TraceProblem(mesh, TraceKind::dtn, order, delta).operator_at(lambda);
}

TraceOperator ntl_operator(const Mesh& mesh, double lambda, double delta) {
  return TraceProblem(mesh, TraceKind::ntl, 2, delta).operator_at(lambda);
}

TraceSpectrum trace_spectrum(const TraceOperator& t) {
  TraceSpectrum out;
  const int n = static_cast<int>(t.matrix.rows());
  const GeneralizedEigen eig = sym_gen_eigs(t.matrix, t.boundary_mass, n);
  out.values.assign(eig.values.data(), eig.values.data() + n);
  out.beta1 = out.values.front();
  out.beta1_vector = eig.vectors.col(0);
  out.neg_count = inertia(t.matrix).n_neg;
  return out;
}

IdentityReport verify_identity(const Mesh& mesh, IdentityKind kind, double lambda, int order, double delta) {
  return TraceProblem(mesh, trace_kind_for(kind), order, delta).identity_at(lambda);
}

bool nudge_clear(const TraceProblem& p, double lambda, bool interior_only, double& shift) {
  auto ok = [&](double x) { return (interior_only ? p.interior_margin(x) : p.margin(x)) >= p.delta(); };
  shift = 0.0;
  if (ok(lambda)) return true;
  const double step = p.delta() * std::max(std::abs(lambda), std::numeric_limits<double>::min());
  for (int j = 1; j <= 10; ++j) {
    for (double sign : {1.0, -1.0}) {
      if (ok(lambda + sign * j * step)) {
        shift = sign * j * step;
        return true;
      }
    }
  }
  return false;
}

SweepResult scan_identities(const TraceProblem& p, const std::vector<double>& grid, int threads) {
  SweepResult out;
  out.parameter = "lambda";
  out.grid = grid;
  out.columns = {"lambda", "neg_count", "lhs", "rhs", "holds", "margin", "nudged"};
  const int n = static_cast<int>(grid.size());
  std::vector<std::optional<SweepResult::Record>> records(n);
  std::vector<std::optional<SweepResult::Skip>> skips(n);
  std::vector<char> holds(n, 1);
  parallel_for(n, threads, [&](int i) {
    double shift = 0.0;
    if (!nudge_clear(p, grid[i], false, shift)) {
      skips[i] = SweepResult::Skip{grid[i], "no shift within 10 delta clears the discrete spectra"};
      return;
    }
    SweepResult::Record rec;
    rec.parameter = grid[i];
    try {
      const IdentityReport r = p.identity_at(grid[i] + shift);
      holds[i] = r.identity_holds && r.haynsworth_holds;
      rec.cells = {format_number(r.lambda), std::to_string(r.neg_count), std::to_string(r.lhs_counting),
                   std::to_string(r.rhs_counting), format_flag(r.identity_holds), format_number(r.margin),
                   format_number(shift)};
    } catch (const Error& e) {
      rec.error = e.what();
      holds[i] = 0;
    }
    records[i] = std::move(rec);
  });
  bool all = true;
  for (int i = 0; i < n; ++i) {
    if (records[i]) {
      all = all && holds[i];
      out.records.push_back(std::move(*records[i]));
    }
    if (skips[i]) out.skips.push_back(std::move(*skips[i]));
  }
  out.summary["all_hold"] = all;
  return out;
}

SweepResult scan_identities(const Mesh& mesh, IdentityKind kind, const std::vector<double>& grid, int threads,
                            int order) {
  if (grid.empty()) {
    SweepResult out;
    out.parameter = "lambda";
    out.columns = {"lambda", "neg_count", "lhs", "rhs", "holds", "margin", "nudged"};
    out.summary["all_hold"] = true;
    return out;
  }
  return scan_identities(TraceProblem(mesh, trace_kind_for(kind), order), grid, threads);
}

SweepResult scan_beta1(const TraceProblem& p, const std::vector<double>& grid, int threads) {
  SweepResult out;
  out.parameter = "lambda";
  out.grid = grid;
  out.columns = {"lambda", "beta1", "neg_count", "margin", "nudged"};
  const int n = static_cast<int>(grid.size());
  std::vector<std::optional<SweepResult::Record>> records(n);
  std::vector<std::optional<SweepResult::Skip>> skips(n);
  parallel_for(n, threads, [&](int i) {
    double shift = 0.0;
    if (!nudge_clear(p, grid[i], true, shift)) {
      skips[i] = SweepResult::Skip{grid[i], "no shift within 10 delta clears the excluded spectrum"};
      return;
    }
    SweepResult::Record rec;
    rec.parameter = grid[i];
    try {
      const TraceOperator t = p.operator_at(grid[i] + shift);
      const TraceSpectrum s = trace_spectrum(t);
      rec.cells = {format_number(t.lambda), format_number(s.beta1), std::to_string(s.neg_count),
                   format_number(t.margin), format_number(shift)};
    } catch (const Error& e) {
      rec.error = e.what();
    }
    records[i] = std::move(rec);
  });
  for (int i = 0; i < n; ++i) {
    if (records[i]) out.records.push_back(std::move(*records[i]));
    if (skips[i]) out.skips.push_back(std::move(*skips[i]));
  }
  return out;
}

}  // namespace payne
