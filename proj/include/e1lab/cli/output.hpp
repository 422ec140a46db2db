#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace e1lab::cli {

// Doubles with 17 significant digits so that a value survives a round trip.
std::string format_double(double v);

// Comma separated, LF line endings, mandatory header.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> tolerances;
  std::string build;
  std::vector<std::string> outputs;
  std::string status = "ok";  // "ok" or "halted"
  std::string halt_reason;
  long long wall_time_ms = 0;
};

// Collects outputs under one directory and writes the manifest last.
class RunContext {
 public:
  RunContext(std::string command, std::filesystem::path out_dir);

  RunManifest& manifest() { return manifest_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }

  // Path for a new output file; registered in the manifest.
  std::filesystem::path output(const std::string& name);

  void halt(const std::string& reason);

  // Writes <command>.manifest.json, returns its path.
  std::filesystem::path finish();

 private:
  std::filesystem::path out_dir_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::string manifest_json(const RunManifest& m);

// Build identifier baked in at configure time.
std::string build_id();

}  // namespace e1lab::cli
