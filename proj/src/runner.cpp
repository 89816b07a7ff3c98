#include "payne/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "payne/counterexample.hpp"
#include "payne/errors.hpp"
#include "payne/run_store.hpp"
#include "payne/spectra.hpp"
#include "payne/spherecap.hpp"
#include "payne/sweep.hpp"
#include "payne/trace.hpp"

#ifndef PAYNE_VERSION
#define PAYNE_VERSION "0.0.0"
#endif

namespace payne {

namespace {

constexpr int kDenseDofGuard = 5000;
constexpr int kSparseDofGuard = 200000;

// Reads parameters with their defaults and remembers the effective values for the manifest.
class Recorder {
public:
  explicit Recorder(const ParameterSet& p) : p_(p) {}

  std::string text(const std::string& k, const std::string& fb) { return note(k, p_.text(k, fb)); }
  int integer(const std::string& k, int fb) {
    const int v = p_.integer(k, fb);
    note(k, std::to_string(v));
    return v;
  }
  double real(const std::string& k, double fb) {
    const double v = p_.real(k, fb);
    note(k, format_number(v));
    return v;
  }
  std::vector<double> reals(const std::string& k, const std::vector<double>& fb) {
    const auto v = p_.reals(k, fb);
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ",") + format_number(x);
    note(k, s);
    return v;
  }
  bool flag(const std::string& k) { return note(k, p_.text(k, "false")) == "true"; }

  const std::map<std::string, std::string>& used() const { return used_; }

private:
  const std::string& note(const std::string& k, const std::string& v) { return used_[k] = v; }
  const ParameterSet& p_;
  std::map<std::string, std::string> used_;
};

struct Run {
  RunDirectory dir;
  RunManifest manifest;
  std::ostream& out;

  void summary(const std::string& key, const std::string& value) {
    manifest.summary[key] = value;
    out << key << '=' << value << '\n';
  }
};

Mesh build_mesh(Recorder& r) {
  const std::string domain = r.text("domain", "disk");
  if (domain == "disk") return make_disk_mesh(r.real("radius", 1.0), r.integer("refine", 3));
  if (domain == "rectangle") {
    const int nx = r.integer("nx", 16);
    return make_rectangle_mesh(r.real("width", 1.0), r.real("height", 1.0), nx, r.integer("ny", nx));
  }
  if (domain == "polygon") {
    const int sides = r.integer("sides", 6);
    const double radius = r.real("radius", 1.0);
    std::vector<Point> corners;
    for (int i = 0; i < sides; ++i) {
      const double t = 2.0 * std::numbers::pi * i / sides;
      corners.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return make_polygon_mesh(corners, r.integer("refine", 3));
  }
  const std::string path = r.text("mesh-file", "");
  if (path.empty()) throw ConfigError("domain = file needs mesh-file");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read mesh file `" + path + "`");
  return read_mesh(in);
}

void guard_dofs(int dofs, int limit) {
  if (dofs > limit) {
    throw SizeError("problem has " + std::to_string(dofs) + " degrees of freedom, above the guard of " +
                    std::to_string(limit) + " (raise max-dofs to override)");
  }
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  s.write_csv(os);
  return os.str();
}

std::string problems_csv(const SweepResult& s) {
  std::ostringstream os;
  s.write_problems_csv(os);
  return os.str();
}

std::vector<double> column(const SweepResult& s, std::size_t c) {
  std::vector<double> v;
  for (const auto& r : s.records) {
    if (r.error.empty()) v.push_back(std::strtod(r.cells[c].c_str(), nullptr));
  }
  return v;
}

// ---------------------------------------------------------------------------------------

void cmd_spectrum(Recorder& r, Run& run) {
  const Mesh mesh = build_mesh(r);
  const Problem problem = parse_problem(r.text("problem", "dirichlet"));
  const int count = r.integer("count", 6);
  const int guard = r.integer("max-dofs", kSparseDofGuard);
  run.manifest.hashes["mesh"] = mesh.hash();

  Spectrum s;
  if (problem == Problem::dirichlet || problem == Problem::neumann) {
    const int order = r.integer("order", 2);
    const OperatorPair pair = assemble_lagrange(mesh, order);
    guard_dofs(pair.dofmap.size(), guard);
    s = laplace_spectrum(mesh, pair, problem == Problem::dirichlet ? LaplaceBC::dirichlet : LaplaceBC::neumann, count);
  } else {
    const OperatorPair pair = assemble_morley(mesh);
    guard_dofs(pair.dofmap.size(), guard);
    s = problem == Problem::buckling ? buckling_spectrum(mesh, pair, count) : navier_spectrum(mesh, pair, count);
  }
  std::ostringstream os;
  write_spectrum_csv(os, s);
  run.dir.write_file("spectrum.csv", os.str());

  if (mesh.domain_tag() == DomainTag::disk) {
    const Spectrum o = disk_oracle(problem, count, mesh.radius());
    std::ostringstream cmp;
    cmp << "index,fem,oracle,rel_error\n";
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const double err = o[i] == 0.0 ? std::abs(s[i]) : std::abs(s[i] - o[i]) / std::abs(o[i]);
      if (i > 0 || o[i] != 0.0) worst = std::max(worst, err);
      cmp << i + 1 << ',' << format_number(s[i]) << ',' << format_number(o[i]) << ',' << format_number(err) << '\n';
    }
    run.dir.write_file("oracle_comparison.csv", cmp.str());
    run.summary("max_rel_error", format_number(worst));
  }
  for (std::size_t i = 0; i < s.size(); ++i) run.summary("value_" + std::to_string(i + 1), format_number(s[i]));
}

void cmd_identity_scan(Recorder& r, Run& run) {
  const Mesh mesh = build_mesh(r);
  const IdentityKind kind = parse_identity_kind(r.text("kind", "friedlander"));
  const double lmin = r.real("lmin", kind == IdentityKind::friedlander ? 0.5 : 1.0);
  const double lmax = r.real("lmax", kind == IdentityKind::friedlander ? 40.0 : 60.0);
  const int points = r.integer("points", 20);
  const int order = r.integer("order", 2);
  const double delta = r.real("delta", kDefaultMargin);
  const int threads = r.integer("threads", 1);
  const int guard = r.integer("max-dofs", kDenseDofGuard);
  run.manifest.hashes["mesh"] = mesh.hash();

  const TraceProblem problem(mesh, trace_kind_for(kind), order, delta);
  guard_dofs(problem.dof_count(), guard);
  const SweepResult s = scan_identities(problem, interior_grid(lmin, lmax, points), threads);
  run.dir.write_file("identity_scan.csv", sweep_csv(s));
  run.dir.write_file("skipped.csv", problems_csv(s));
  int nudged = 0;
  for (const auto& rec : s.records) {
    if (rec.error.empty() && rec.cells.back() != "0") ++nudged;
  }
  run.summary("points", std::to_string(s.records.size()));
  run.summary("skipped", std::to_string(s.skips.size()));
  run.summary("nudged", std::to_string(nudged));
  run.summary("all_hold", format_flag(s.flag("all_hold")));
}

void cmd_beta1_scan(Recorder& r, Run& run) {
  const Mesh mesh = build_mesh(r);
  const TraceKind kind = r.text("operator", "ntl") == "dtn" ? TraceKind::dtn : TraceKind::ntl;
  const int order = r.integer("order", 2);
  const double delta = r.real("delta", kDefaultMargin);
  const int threads = r.integer("threads", 1);
  const int guard = r.integer("max-dofs", kDenseDofGuard);
  const bool sign_check = r.flag("sign-check");
  run.manifest.hashes["mesh"] = mesh.hash();

  const TraceProblem problem(mesh, kind, order, delta);
  guard_dofs(problem.dof_count(), guard);
  const double lambda1 = problem.full_spectrum().empty() ? 0.0 : problem.full_spectrum().front();
  const double excluded1 = problem.excluded_spectrum().front();

  std::vector<double> grid;
  std::size_t below = 0;
  if (sign_check) {
    if (kind != TraceKind::ntl) throw ConfigError("sign-check needs operator = ntl");
    grid = interior_grid(0.0, lambda1, 5);
    below = grid.size();
    for (double x : interior_grid(lambda1, excluded1, 5)) grid.push_back(x);
  } else {
    grid = interior_grid(r.real("lmin", 0.5), r.real("lmax", excluded1), r.integer("points", 20));
  }
  const SweepResult s = scan_beta1(problem, grid, threads);
  run.dir.write_file("beta1.csv", sweep_csv(s));
  run.dir.write_file("skipped.csv", problems_csv(s));
  PlotSeries plot;
  plot.title = "beta_1 of the " + to_string(kind) + " operator against lambda";
  plot.names = {"lambda", "beta1"};
  plot.columns = {column(s, 0), column(s, 1)};
  run.dir.write_file("beta1.dat", format_plot_data(plot));

  run.summary("full_lambda1", format_number(lambda1));
  run.summary("excluded_lambda1", format_number(excluded1));
  if (sign_check) {
    bool pos = true, neg = true;
    std::size_t seen_below = 0, seen_above = 0;
    for (const auto& rec : s.records) {
      if (!rec.error.empty()) continue;
      const double x = std::strtod(rec.cells[0].c_str(), nullptr);
      const double b = std::strtod(rec.cells[1].c_str(), nullptr);
      if (x < lambda1) {
        pos = pos && b > 0.0;
        ++seen_below;
      } else {
        neg = neg && b < 0.0;
        ++seen_above;
      }
    }
    const bool complete = seen_below == below && seen_above == grid.size() - below;
    run.summary("beta1_positive_below", format_flag(pos));
    run.summary("beta1_negative_between", format_flag(neg));
    run.summary("sign_check_holds", format_flag(pos && neg && complete));
  }
}

void cmd_counterexample(Recorder& r, Run& run) {
  const Mesh mesh = build_mesh(r);
  const double lambda = r.real("lambda", 20.0);
  std::string regime = r.text("regime", "auto");
  run.manifest.hashes["mesh"] = mesh.hash();
  const OperatorPair morley = assemble_morley(mesh);
  if (regime == "auto") {
    const double L1 = buckling_ground_state(mesh, morley).Lambda1;
    regime = lambda > L1 ? "divergence" : "bounded";
  }
  run.summary("regime", regime);
  const int guard = r.integer("max-dofs", regime == "divergence" ? kSparseDofGuard : kDenseDofGuard);

  if (regime == "divergence") {
    guard_dofs(morley.dofmap.size(), guard);
    const auto eps = r.reals("eps", {1e-1, 1e-2, 1e-3, 1e-4});
    const DivergenceReport d = divergence_sweep(mesh, lambda, eps);
    std::ostringstream os;
    write_divergence_csv(os, d);
    run.dir.write_file("divergence.csv", os.str());
    PlotSeries plot;
    plot.title = "|quotient| of u1 + eps h against eps (quotients are negative)";
    plot.names = {"eps", "quotient"};
    plot.xlog = plot.ylog = true;
    plot.columns.resize(2);
    for (const auto& smp : d.samples) {
      plot.columns[0].push_back(smp.eps);
      plot.columns[1].push_back(std::abs(smp.quotient));
    }
    run.dir.write_file("divergence.dat", format_plot_data(plot));
    run.summary("Lambda1", format_number(d.Lambda1));
    run.summary("alpha", format_number(d.alpha));
    run.summary("alpha_direct", format_number(d.alpha_direct));
    run.summary("perimeter", format_number(d.perimeter));
    run.summary("cross_term", format_number(d.cross_term));
    if (!d.samples.empty()) run.summary("numerator_smallest_eps", format_number(d.samples.back().numerator));
    run.summary("slope", format_number(d.fitted_slope));
    run.summary("slope_stderr", format_number(d.slope_stderr));
    run.summary("anomaly", format_flag(d.anomaly));
  } else {
    guard_dofs(morley.dofmap.size(), guard);
    const int trials = r.integer("trials", 200);
    const int seed = r.integer("seed", 1);
    const BoundedBelowReport b = bounded_below_check(mesh, lambda, trials, static_cast<unsigned long long>(seed));
    std::ostringstream os;
    os << "lambda,Lambda1,beta1,trials,min_quotient,violations,minimizer_residual,minimizer_quotient,passed\n";
    os << format_number(b.lambda) << ',' << format_number(b.Lambda1) << ',' << format_number(b.beta1) << ','
       << b.trials << ',' << format_number(b.min_quotient) << ',' << b.violations << ','
       << format_number(b.minimizer_residual) << ',' << format_number(b.minimizer_quotient) << ','
       << format_flag(b.passed) << '\n';
    run.dir.write_file("bounded.csv", os.str());
    run.summary("Lambda1", format_number(b.Lambda1));
    run.summary("beta1", format_number(b.beta1));
    run.summary("min_quotient", format_number(b.min_quotient));
    run.summary("violations", std::to_string(b.violations));
    run.summary("minimizer_residual", format_number(b.minimizer_residual));
    run.summary("passed", format_flag(b.passed));
  }
}

void cmd_spherecap(Recorder& r, Run& run) {
  const auto eps = r.reals("eps-list", {0.4, 0.2, 0.1, 0.05});
  const int n = r.integer("n-nodes", kDefaultCapIntervals);
  const int modes = r.integer("modes", kDefaultCapModes);
  const int threads = r.integer("threads", 1);
  const CapScan scan = cap_scan(eps, n, modes, threads);
  run.manifest.hashes["grid"] = "geometric n=" + std::to_string(n) + " modes=0.." + std::to_string(modes);

  run.dir.write_file("spherecap.csv", sweep_csv(scan.sweep));
  run.dir.write_file("skipped.csv", problems_csv(scan.sweep));
  std::ostringstream res;
  res << "eps,intervals,cauchy_change,Lambda1_mode,payne_tie\n";
  for (const auto& p : scan.points) {
    res << format_number(p.eps) << ',' << p.intervals << ',' << format_number(p.cauchy_change) << ','
        << p.Lambda1_mode << ',' << format_flag(p.payne_tie) << '\n';
  }
  run.dir.write_file("cap_resolution.csv", res.str());
  std::ostringstream fits;
  fits << "model,intercept,slope,rms_residual,points\n";
  for (const auto& f : scan.fits) {
    fits << '"' << f.model << "\"," << format_number(f.intercept) << ',' << format_number(f.slope) << ','
         << format_number(f.rms_residual) << ',' << f.points << '\n';
  }
  run.dir.write_file("fits.csv", fits.str());

  const char* names[] = {"lambda1", "lambda2", "mu2", "Lambda1"};
  for (int c = 0; c < 4; ++c) {
    PlotSeries plot;
    plot.title = std::string(names[c]) + " of the sphere minus a cap of radius eps";
    plot.names = {"eps", names[c]};
    plot.xlog = true;
    plot.columns.resize(2);
    for (const auto& p : scan.points) {
      const double v[] = {p.lambda1, p.lambda2, p.mu2, p.Lambda1};
      plot.columns[0].push_back(p.eps);
      plot.columns[1].push_back(v[c]);
    }
    run.dir.write_file(std::string(names[c]) + ".dat", format_plot_data(plot));
  }
  bool payne_any = false;
  for (const auto& p : scan.points) payne_any = payne_any || p.payne_fails;
  run.summary("points", std::to_string(scan.points.size()));
  run.summary("friedlander_fails_small_eps", format_flag(scan.sweep.flag("friedlander_fails_small_eps")));
  run.summary("payne_fails_any", format_flag(payne_any));
  run.summary("resolution_warning", format_flag(scan.sweep.flag("resolution_warning")));
}

void cmd_report(Recorder&, Run& run, const std::filesystem::path& root) {
  const auto runs = list_runs(root);
  std::ostringstream os;
  os << "run,command,complete,files\n";
  int complete = 0;
  for (const auto& info : runs) {
    if (info.name == run.dir.path().filename().string()) continue;
    os << info.name << ',' << info.command << ',' << format_flag(info.complete) << ',' << info.files.size() << '\n';
    complete += info.complete;
    run.out << (info.complete ? "complete   " : "incomplete ") << info.name << ' ' << info.command << '\n';
  }
  run.dir.write_file("report.csv", os.str());
  run.summary("runs", std::to_string(runs.size() - 1));
  run.summary("complete", std::to_string(complete));
}

struct Subcommand {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<std::string> mesh_keys = {"domain", "radius", "refine", "width", "height",
                                                     "nx",     "ny",     "sides",  "mesh-file"};
  auto with_mesh = [](std::vector<std::string> extra) {
    std::vector<std::string> k = mesh_keys;
    k.insert(k.end(), extra.begin(), extra.end());
    return k;
  };
  static const std::vector<Subcommand> list = {
      {"spectrum", "Eigenvalues of one problem on one mesh", with_mesh({"problem", "order", "count", "max-dofs"})},
      {"identity-scan", "Counting identity for the trace operator over a lambda grid",
       with_mesh({"kind", "lmin", "lmax", "points", "order", "delta", "threads", "max-dofs"})},
      {"beta1-scan", "Smallest trace-operator eigenvalue over a lambda grid",
       with_mesh({"operator", "lmin", "lmax", "points", "order", "delta", "threads", "max-dofs", "sign-check"})},
      {"counterexample", "Quotient along u1 + eps h, or the bounded-below check",
       with_mesh({"lambda", "eps", "regime", "trials", "seed", "max-dofs"})},
      {"spherecap", "Sphere minus a polar cap: eps sweep", {"eps-list", "n-nodes", "modes", "threads"}},
      {"report", "List the runs under the run root", {}},
  };
  return list;
}

}  // namespace

std::string library_version() { return PAYNE_VERSION; }

Mesh mesh_from_parameters(const ParameterSet& p) {
  Recorder r(p);
  return build_mesh(r);
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral experiments on Dirichlet, Neumann and buckling problems"};
  app.name("payne");
  app.require_subcommand(1);
  app.set_version_flag("--version", PAYNE_VERSION);

  std::string config_path, run_root;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& sc : subcommands()) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    sub->add_option("--config", config_path, "Flat key = value file; flags override it");
    sub->add_option("--run-root", run_root, "Directory that receives run directories");
    for (const auto& key : sc.keys) {
      if (key == "sign-check") {
        options[sc.name][key] = sub->add_flag("--" + key, "Five points below the first eigenvalue and five up to the first excluded one");
      } else {
        options[sc.name][key] = sub->add_option("--" + key, raw[sc.name][key]);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  ParameterSet params;
  try {
    if (!config_path.empty()) params = load_config(config_path);
    ParameterSet flags;
    for (const auto& [key, opt] : options[command]) {
      if (opt->count() == 0) continue;
      flags.set(key, key == "sign-check" ? "true" : raw[command][key]);
    }
    params.merge(flags);
    // config keys that the subcommand does not take are rejected rather than ignored
    const auto& allowed = options[command];
    for (const auto& [key, value] : params.values()) {
      if (!allowed.count(key)) throw ConfigError("parameter `" + key + "` does not apply to " + command);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (run_root.empty()) {
    const char* env = std::getenv("PAYNE_RUN_ROOT");
    run_root = env && *env ? env : "runs";
  }

  try {
    Recorder rec(params);
    Run run{RunDirectory::create(run_root, command), RunManifest{}, out};
    run.manifest.command = command;
    run.manifest.version = PAYNE_VERSION;
    run.manifest.started = utc_iso_timestamp();
    if (command == "spectrum") cmd_spectrum(rec, run);
    else if (command == "identity-scan") cmd_identity_scan(rec, run);
    else if (command == "beta1-scan") cmd_beta1_scan(rec, run);
    else if (command == "counterexample") cmd_counterexample(rec, run);
    else if (command == "spherecap") cmd_spherecap(rec, run);
    else cmd_report(rec, run, run_root);
    run.manifest.parameters = rec.used();
    run.manifest.finished = utc_iso_timestamp();
    run.dir.finish(run.manifest);
    out << "run_dir=" << run.dir.path().string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace payne
