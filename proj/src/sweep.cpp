#include "payne/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "payne/errors.hpp"

namespace payne {

bool SweepResult::flag(const std::string& name) const {
  auto it = summary.find(name);
  return it != summary.end() && it->second;
}

void SweepResult::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    for (std::size_t i = 0; i < r.cells.size(); ++i) os << (i ? "," : "") << r.cells[i];
    os << '\n';
  }
}

void SweepResult::write_problems_csv(std::ostream& os) const {
  os << parameter << ",reason\n";
  for (const auto& s : skips) os << format_number(s.parameter) << ",\"" << s.reason << "\"\n";
  for (const auto& r : records) {
    if (!r.error.empty()) os << format_number(r.parameter) << ",\"" << r.error << "\"\n";
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_flag(bool b) { return b ? "true" : "false"; }

std::vector<double> interior_grid(double lo, double hi, int n) {
  if (n < 0) throw DomainError("grid point count must be non-negative");
  if (n > 0 && !(hi > lo)) throw DomainError("grid needs lo < hi");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (i + 1) * (hi - lo) / (n + 1);
  return g;
}

}  // namespace payne
