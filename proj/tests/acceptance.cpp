// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "payne/linalg.hpp"
#include "payne/runner.hpp"
#include "payne/spectra.hpp"

using namespace payne;
namespace fs = std::filesystem;

namespace {

fs::path g_root;

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
  double num(std::size_t r, const std::string& name) const { return std::strtod(rows[r][col(name)].c_str(), nullptr); }
  const std::string& text(std::size_t r, const std::string& name) const { return rows[r][col(name)]; }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  Csv c;
  std::ifstream in(p);
  std::string line;
  if (std::getline(in, line)) c.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) c.rows.push_back(split(line));
  return c;
}

struct Cli {
  int code = -1;
  std::map<std::string, std::string> summary;
  fs::path dir;
  std::string err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "payne");
  args.push_back("--run-root");
  args.push_back(g_root.string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Cli r;
  r.code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  r.err = err.str();
  std::istringstream is(out.str());
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) r.summary[line.substr(0, eq)] = line.substr(eq + 1);
  }
  r.dir = r.summary["run_dir"];
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int g_failed = 0;

void report(int n, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %2d: %s  %s  (%.1f s)\n", n, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

void criterion(int n, const std::function<bool(std::ostringstream&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  detail.precision(7);
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(n, ok, detail.str(), s);
}

// identity-scan CSV: every row holds and the integers satisfy neg = lhs - rhs
bool identity_rows_hold(const Cli& r, std::ostringstream& d, const std::string& label) {
  if (r.code != 0) {
    d << label << " exit " << r.code << ' ' << r.err;
    return false;
  }
  const Csv c = read_csv(r.dir / "identity_scan.csv");
  const Csv skipped = read_csv(r.dir / "skipped.csv");
  bool ok = c.rows.size() == 20 && skipped.rows.empty() && r.summary.at("all_hold") == "true";
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const long neg = std::lround(c.num(i, "neg_count"));
    const long lhs = std::lround(c.num(i, "lhs")), rhs = std::lround(c.num(i, "rhs"));
    ok = ok && neg == lhs - rhs && c.text(i, "holds") == "true";
  }
  d << label << ": " << c.rows.size() << " points, " << skipped.rows.size() << " skipped, " << r.summary.at("nudged")
    << " nudged, max neg " << (c.rows.empty() ? 0 : std::lround(c.num(c.rows.size() - 1, "neg_count"))) << "; ";
  return ok;
}

}  // namespace

int main() {
  g_root = fs::temp_directory_path() / ("payne-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(g_root);

  criterion(1, [](std::ostringstream& d) {
    const Mesh m = make_disk_mesh(1.0, 4);
    const double l1 = 5.783186, l2 = 14.681971, mu2 = 3.389957, L1 = 14.681971;
    const Spectrum oracle_d = disk_oracle(Problem::dirichlet, 3);
    const Spectrum oracle_n = disk_oracle(Problem::neumann, 2);
    const Spectrum oracle_b = disk_oracle(Problem::buckling, 1);
    // the in-repo root finder reproduces the stated constants
    bool ok = rel(oracle_d[0], l1) < 1e-6 && rel(oracle_d[1], l2) < 1e-6 && rel(oracle_n[1], mu2) < 1e-6 &&
              rel(oracle_b[0], L1) < 1e-6;
    const Spectrum dir = laplace_spectrum(m, LaplaceBC::dirichlet, 2, 3);
    const Spectrum neu = laplace_spectrum(m, LaplaceBC::neumann, 2, 2);
    const Spectrum buck = buckling_spectrum(m, 1);
    ok = ok && rel(dir[0], oracle_d[0]) < 5e-3 && rel(dir[1], oracle_d[1]) < 5e-3 && rel(dir[2], oracle_d[2]) < 5e-3 &&
         rel(neu[1], oracle_n[1]) < 5e-3 && rel(buck[0], oracle_b[0]) < 1e-2;
    const Cli r = cli({"spectrum", "--domain", "disk", "--refine", "4", "--problem", "dirichlet", "--order", "2",
                       "--count", "6"});
    const Csv c = read_csv(r.dir / "spectrum.csv");
    ok = ok && r.code == 0 && c.rows.size() == 6 && rel(c.num(0, "value"), 5.783) < 5e-3;
    d << "lambda1 " << dir[0] << ", lambda2,3 " << dir[1] << ' ' << dir[2] << ", mu2 " << neu[1] << ", Lambda1 "
      << buck[0];
    return ok;
  });

  criterion(2, [](std::ostringstream& d) {
    bool ok = true;
    for (const Mesh& m : {make_disk_mesh(1.0, 4), make_rectangle_mesh(1.0, 1.0, 16, 16)}) {
      const Spectrum dir = laplace_spectrum(m, LaplaceBC::dirichlet, 2, 5);
      const Spectrum nav = navier_spectrum(m, 5);
      double worst = 0.0;
      for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(nav[i], dir[i]));
      ok = ok && worst < 0.02;
      d << to_string(m.domain_tag()) << " max pairwise gap " << worst << "; ";
    }
    return ok;
  });

  criterion(3, [](std::ostringstream& d) {
    const Cli disk = cli({"identity-scan", "--kind", "friedlander", "--domain", "disk", "--refine", "3", "--points", "20"});
    const Cli rect = cli({"identity-scan", "--kind", "friedlander", "--domain", "rectangle", "--nx", "16", "--ny", "16",
                          "--points", "20"});
    const bool a = identity_rows_hold(disk, d, "disk");
    const bool b = identity_rows_hold(rect, d, "rectangle");
    return a && b;
  });

  criterion(4, [](std::ostringstream& d) {
    const Cli disk = cli({"identity-scan", "--kind", "liu", "--domain", "disk", "--refine", "3", "--lmin", "1", "--lmax",
                          "60", "--points", "20"});
    const Cli rect = cli({"identity-scan", "--kind", "liu", "--domain", "rectangle", "--nx", "16", "--ny", "16",
                          "--lmin", "1", "--lmax", "60", "--points", "20"});
    const bool a = identity_rows_hold(disk, d, "disk");
    const bool b = identity_rows_hold(rect, d, "rectangle");
    return a && b;
  });

  criterion(5, [](std::ostringstream& d) {
    const Cli r = cli({"beta1-scan", "--domain", "disk", "--refine", "3", "--operator", "ntl", "--sign-check"});
    if (r.code != 0) {
      d << r.err;
      return false;
    }
    const double l1 = std::stod(r.summary.at("full_lambda1"));
    const double L1 = std::stod(r.summary.at("excluded_lambda1"));
    const Csv c = read_csv(r.dir / "beta1.csv");
    int pos_below = 0, neg_between = 0, below = 0, between = 0;
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const double x = c.num(i, "lambda"), b = c.num(i, "beta1");
      if (x < l1) {
        ++below;
        pos_below += b > 0.0;
      } else if (x < L1) {
        ++between;
        neg_between += b < 0.0;
      }
    }
    d << "lambda1,h " << l1 << ", Lambda1,h " << L1 << "; beta1 > 0 at " << pos_below << "/" << below
      << ", beta1 < 0 at " << neg_between << "/" << between;
    return below == 5 && between == 5 && pos_below == 5 && neg_between == 5 && r.summary.at("sign_check_holds") == "true";
  });

  criterion(6, [](std::ostringstream& d) {
    const Cli r = cli({"counterexample", "--domain", "disk", "--refine", "4", "--lambda", "20", "--eps",
                       "1e-1,1e-2,1e-3,1e-4"});
    if (r.code != 0) {
      d << r.err;
      return false;
    }
    const double slope = std::stod(r.summary.at("slope"));
    const double alpha = std::stod(r.summary.at("alpha"));
    const double alpha_direct = std::stod(r.summary.at("alpha_direct"));
    const double L1 = std::stod(r.summary.at("Lambda1"));
    const Csv c = read_csv(r.dir / "divergence.csv");
    const double num = c.num(c.rows.size() - 1, "numerator");
    // alpha = -(lambda - Lambda1) * int |grad u1|^2 with the ground state normalized to 1
    const double alpha_formula = -(20.0 - L1);
    const bool two_way = std::abs(alpha - alpha_direct) <= 1e-10 * std::abs(alpha) &&
                         std::abs(alpha - alpha_formula) <= 1e-10 * std::abs(alpha);
    d << "slope " << slope << ", numerator(1e-4) " << num << " vs alpha " << alpha << " (rel "
      << rel(num, alpha) << "), alpha two-way gap " << std::abs(alpha - alpha_direct);
    return std::abs(slope + 2.0) <= 0.15 && rel(num, alpha) <= 1e-3 && two_way && c.rows.size() == 4;
  });

  criterion(7, [](std::ostringstream& d) {
    const Cli r = cli({"counterexample", "--domain", "disk", "--refine", "3", "--lambda", "2", "--trials", "200"});
    if (r.code != 0) {
      d << r.err;
      return false;
    }
    const Csv c = read_csv(r.dir / "bounded.csv");
    const double beta1 = c.num(0, "beta1"), minq = c.num(0, "min_quotient");
    const double resid = c.num(0, "minimizer_residual");
    d << "beta1(2) " << beta1 << ", min trial quotient " << minq << ", violations " << c.text(0, "violations")
      << ", minimizer residual " << resid;
    return r.summary.at("regime") == "bounded" && c.text(0, "trials") == "200" && c.text(0, "violations") == "0" &&
           minq >= beta1 - 1e-9 * std::abs(beta1) && resid <= 1e-6;
  });

  // criteria 8 and 9 read the same run
  Cli cap = cli({"spherecap", "--eps-list", "0.4,0.2,0.1,0.05", "--threads", "4"});

  criterion(8, [&](std::ostringstream& d) {
    if (cap.code != 0) {
      d << cap.err;
      return false;
    }
    const Csv c = read_csv(cap.dir / "spherecap.csv");
    const Csv res = read_csv(cap.dir / "cap_resolution.csv");
    bool ok = c.rows.size() == 4 && res.rows.size() == 4;
    double worst_cauchy = 0.0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) worst_cauchy = std::max(worst_cauchy, res.num(i, "cauchy_change"));
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const double eps = c.num(i, "eps");
      if (eps > 0.1 + 1e-12) continue;
      const double l1 = c.num(i, "lambda1"), mu2 = c.num(i, "mu2");
      ok = ok && l1 < mu2 && rel(mu2, 2.0) < 0.02;
      d << "eps " << eps << ": lambda1 " << l1 << " < mu2 " << mu2 << "; ";
    }
    d << "max Cauchy change " << worst_cauchy;
    return ok && worst_cauchy < 0.01;
  });

  criterion(9, [&](std::ostringstream& d) {
    if (cap.code != 0) {
      d << cap.err;
      return false;
    }
    const Csv c = read_csv(cap.dir / "spherecap.csv");
    const Csv res = read_csv(cap.dir / "cap_resolution.csv");
    bool ok = c.col("Lambda1") >= 0 && c.col("payne_fails") >= 0 && c.rows.size() == 4;
    for (std::size_t i = 0; ok && i < c.rows.size(); ++i) {
      const std::string& flag = c.text(i, "payne_fails");
      ok = std::isfinite(c.num(i, "Lambda1")) && (flag == "true" || flag == "false") && res.num(i, "cauchy_change") < 0.01;
      d << "eps " << c.text(i, "eps") << ": Lambda1 " << c.num(i, "Lambda1") << " payne_fails=" << flag << "; ";
    }
    return ok;
  });

  criterion(10, [](std::ostringstream& d) {
    std::mt19937_64 rng(424242);
    int hay_ok = 0, inertia_ok = 0;
    for (int t = 0; t < 20; ++t) {
      const int n = 10 + 3 * t;
      const Matrix Q = oracle::random_symmetric(n, rng);
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      const int ni = n / 3 + t % 5;
      std::vector<int> interior(perm.begin(), perm.begin() + ni), boundary(perm.begin() + ni, perm.end());
      std::sort(interior.begin(), interior.end());
      std::sort(boundary.begin(), boundary.end());
      const SchurElimination s = eliminate_interior(Q, interior, boundary);
      hay_ok += inertia(Q) == s.interior + inertia(s.complement);
    }
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
      const Matrix A = oracle::random_symmetric(100, rng);
      const Vector ev = sym_gen_eigs(A, Matrix::Identity(100, 100), 100, false).values;
      int neg = 0;
      for (int i = 0; i < ev.size(); ++i) neg += ev[i] < 0.0;
      const Inertia in = inertia(A);
      inertia_ok += in.n_neg == neg && in.n_neg == oracle::count_below(oracle::jacobi_eigenvalues(A), 0.0) &&
                    in.dimension() == 100;
    }
    d << "Haynsworth " << hay_ok << "/20, inertia vs eigensolver " << inertia_ok << "/" << trials << " (100x100)";
    return hay_ok == 20 && inertia_ok == trials;
  });

  fs::remove_all(g_root);
  std::printf("%s: %d of 10 criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
