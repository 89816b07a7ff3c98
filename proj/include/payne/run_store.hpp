#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace payne {

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string version;
  std::map<std::string, std::string> hashes;  // mesh hashes, grid descriptions
  std::map<std::string, std::string> summary;
  std::string started;
  std::string finished;
  std::vector<std::string> files;
};

/// One immutable run directory `<root>/<UTC timestamp>-<command>[-k]`.
class RunDirectory {
public:
  /// Creates the directory; an existing name gets the next free `-k` suffix.
  static RunDirectory create(const std::filesystem::path& root, const std::string& command);

  const std::filesystem::path& path() const { return path_; }
  const std::vector<std::string>& files() const { return files_; }

  /// Writes `name` inside the run directory and records it for the manifest.
  void write_file(const std::string& name, const std::string& content);

  /// Writes manifest.json (temporary file, then rename). The manifest lists exactly the
  /// files written through this object.
  void finish(RunManifest manifest);

private:
  std::filesystem::path path_;
  std::vector<std::string> files_;
};

std::string utc_timestamp();        // 20261014T093000Z
std::string utc_iso_timestamp();    // 2026-10-14T09:30:00Z

struct PlotSeries {
  std::vector<std::string> names;          // one per column
  std::vector<std::vector<double>> columns;
  bool xlog = false;
  bool ylog = false;
  std::string title;
};

/// Whitespace-delimited text with a `#` header (title, column names, `# xlog ylog` hints).
/// DomainError on column length mismatch.
std::string format_plot_data(const PlotSeries& series);

struct RunInfo {
  std::string name;
  std::string command;  // from the manifest, empty when incomplete
  bool complete = false;
  std::vector<std::string> files;
};

/// Run directories under root, sorted by name. A directory without manifest.json is incomplete.
std::vector<RunInfo> list_runs(const std::filesystem::path& root);

}  // namespace payne
