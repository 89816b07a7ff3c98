#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace payne {

/// Carrier for every parameter scan. Cells are preformatted so CSV output is bit-stable.
struct SweepResult {
  struct Record {
    double parameter = 0.0;
    std::vector<std::string> cells;  // one per column; empty when `error` is set
    std::string error;
  };
  struct Skip {
    double parameter = 0.0;
    std::string reason;
  };

  std::string parameter;
  std::vector<double> grid;
  std::vector<std::string> columns;
  std::vector<Record> records;
  std::vector<Skip> skips;
  std::map<std::string, bool> summary;

  bool flag(const std::string& name) const;

  /// Header from `columns`, then one line per record without an error.
  void write_csv(std::ostream& os) const;
  /// `parameter,reason` for skips and failed records; header only when there are none.
  void write_problems_csv(std::ostream& os) const;
};

/// Shortest round-trip decimal (%.17g); non-finite values become `nan`, `inf`, `-inf`.
std::string format_number(double x);
std::string format_flag(bool b);

/// λ_i = lo + (i+1)(hi-lo)/(n+1), i = 0..n-1: interior points of (lo, hi).
std::vector<double> interior_grid(double lo, double hi, int n);

}  // namespace payne
