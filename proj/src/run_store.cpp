#include "payne/run_store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "payne/errors.hpp"
#include "payne/sweep.hpp"

namespace payne {

namespace fs = std::filesystem;

namespace {

std::string format_utc(const char* fmt) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

void write_all(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write `" + p.string() + "`");
  out << content;
  out.close();
  if (!out) throw Error("write to `" + p.string() + "` failed");
}

}  // namespace

std::string utc_timestamp() { return format_utc("%Y%m%dT%H%M%SZ"); }
std::string utc_iso_timestamp() { return format_utc("%Y-%m-%dT%H:%M:%SZ"); }

RunDirectory RunDirectory::create(const fs::path& root, const std::string& command) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error("cannot create run root `" + root.string() + "`: " + ec.message());
  const std::string base = utc_timestamp() + "-" + command;
  for (int k = 1; k < 10000; ++k) {
    const fs::path candidate = root / (k == 1 ? base : base + "-" + std::to_string(k));
    // create_directory reports false when the name is taken, which makes the claim atomic
    if (fs::create_directory(candidate, ec)) {
      RunDirectory d;
      d.path_ = candidate;
      return d;
    }
    if (ec) throw Error("cannot create run directory `" + candidate.string() + "`: " + ec.message());
  }
  throw Error("no free run directory name under `" + root.string() + "`");
}

void RunDirectory::write_file(const std::string& name, const std::string& content) {
  if (name == "manifest.json") throw DomainError("manifest.json is reserved");
  write_all(path_ / name, content);
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void RunDirectory::finish(RunManifest manifest) {
  manifest.files = files_;
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  j["parameters"] = manifest.parameters;
  j["hashes"] = manifest.hashes;
  j["summary"] = manifest.summary;
  j["files"] = manifest.files;
  const fs::path tmp = path_ / "manifest.json.tmp";
  write_all(tmp, j.dump(2) + "\n");
  std::error_code ec;
  fs::rename(tmp, path_ / "manifest.json", ec);
  if (ec) throw Error("cannot finalize manifest: " + ec.message());
}

std::string format_plot_data(const PlotSeries& series) {
  if (series.names.size() != series.columns.size()) throw DomainError("plot column names and data differ in count");
  std::size_t rows = series.columns.empty() ? 0 : series.columns.front().size();
  for (const auto& c : series.columns) {
    if (c.size() != rows) throw DomainError("plot columns differ in length");
  }
  std::ostringstream os;
  if (!series.title.empty()) os << "# " << series.title << '\n';
  os << '#';
  for (const auto& n : series.names) os << ' ' << n;
  os << '\n';
  if (series.xlog || series.ylog) {
    os << '#';
    if (series.xlog) os << " xlog";
    if (series.ylog) os << " ylog";
    os << '\n';
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < series.columns.size(); ++c) os << (c ? " " : "") << format_number(series.columns[c][r]);
    os << '\n';
  }
  return os.str();
}

std::vector<RunInfo> list_runs(const fs::path& root) {
  std::vector<RunInfo> runs;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return runs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    RunInfo info;
    info.name = entry.path().filename().string();
    const fs::path manifest = entry.path() / "manifest.json";
    if (fs::exists(manifest)) {
      std::ifstream in(manifest);
      try {
        const auto j = nlohmann::json::parse(in);
        info.command = j.value("command", "");
        info.files = j.value("files", std::vector<std::string>{});
        info.complete = true;
      } catch (const nlohmann::json::exception&) {
        info.complete = false;
      }
    }
    runs.push_back(std::move(info));
  }
  std::sort(runs.begin(), runs.end(), [](const RunInfo& a, const RunInfo& b) { return a.name < b.name; });
  return runs;
}

}  // namespace payne
