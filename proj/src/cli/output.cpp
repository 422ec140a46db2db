#include "e1lab/cli/output.hpp"

#include <cstdio>
#include <json.hpp>

#include "e1lab/errors.hpp"

#ifndef E1LAB_BUILD_ID
#define E1LAB_BUILD_ID "unknown"
#endif

namespace e1lab::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const double* d = std::get_if<double>(&cells[i])) {
      out_ << format_double(*d);
    } else if (const long long* n = std::get_if<long long>(&cells[i])) {
      out_ << *n;
    } else {
      const std::string& text = std::get<std::string>(cells[i]);
      if (text.find_first_of(",\"\n") == std::string::npos) {
        out_ << text;
      } else {
        out_ << '"';
        for (char c : text) out_ << (c == '"' ? "\"\"" : std::string(1, c));
        out_ << '"';
      }
    }
  }
  out_ << '\n';
}

RunContext::RunContext(std::string command, std::filesystem::path out_dir)
    : out_dir_(std::move(out_dir)), start_(std::chrono::steady_clock::now()) {
  manifest_.command = std::move(command);
  manifest_.build = build_id();
  std::error_code ec;
  std::filesystem::create_directories(out_dir_, ec);
  if (ec) throw Error(ErrorKind::InvalidArgument, "cannot create " + out_dir_.string() + ": " + ec.message());
}

std::filesystem::path RunContext::output(const std::string& name) {
  const std::filesystem::path p = out_dir_ / name;
  manifest_.outputs.push_back(p.string());
  return p;
}

void RunContext::halt(const std::string& reason) {
  manifest_.status = "halted";
  manifest_.halt_reason = reason;
}

std::filesystem::path RunContext::finish() {
  manifest_.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
  std::string slug = manifest_.command;
  for (char& c : slug)
    if (c == ' ') c = '-';
  const std::filesystem::path p = out_dir_ / (slug + ".manifest.json");
  std::ofstream out(p, std::ios::binary);
  out << manifest_json(manifest_) << '\n';
  return p;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["schema"] = "e1lab-manifest/1";
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["tolerances"] = m.tolerances;
  j["build"] = m.build;
  j["outputs"] = m.outputs;
  if (m.status == "ok") {
    j["status"] = "ok";
  } else {
    j["status"] = {{"halted", m.halt_reason}};
  }
  j["wall_time_ms"] = m.wall_time_ms;
  return j.dump(2);
}

std::string build_id() { return E1LAB_BUILD_ID; }

}  // namespace e1lab::cli
