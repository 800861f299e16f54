#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "json.hpp"

namespace vsum_cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string require_string(const ordered_json& obj, const char* key, const std::string& where,
                           bool non_empty) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw CliError(kExitInput, where + ": missing \"" + key + "\"");
  if (!it->is_string()) throw CliError(kExitInput, where + ": \"" + key + "\" must be a string");
  std::string value = it->get<std::string>();
  if (non_empty && value.empty()) {
    throw CliError(kExitInput, where + ": \"" + key + "\" must not be empty");
  }
  return value;
}

struct Outcome {
  bool ok = false;
  std::string error;
  int width = 0;
  int height = 0;
  double elapsed_ms = 0.0;
};

Outcome run_entry(const ManifestEntry& entry, const vsum_config* cfg, int depth) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const StreamPtr stream = open_stream(entry.input);
    const Sources src = build_sources(stream.get(), entry.input);
    vsum_image* fused = nullptr;
    check(vsum_summarize(src.first.get(), src.average.get(), cfg, &fused), kExitInput, "fusion");
    const ImagePtr fused_ptr(fused);
    int channels = 0;
    check(vsum_image_info(fused, &out.width, &out.height, &channels), kExitInput, "fusion");
    const fs::path parent = fs::path(entry.output).parent_path();
    if (!parent.empty()) {
      std::error_code ec;
      fs::create_directories(parent, ec);
      if (ec) throw CliError(kExitOutput, "cannot create '" + parent.string() + "'");
    }
    check(vsum_image_write(fused, entry.output.c_str(), depth), kExitOutput,
          "cannot write '" + entry.output + "'");
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.width = out.height = 0;
  }
  out.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitInput, "cannot read manifest '" + path + "'");
  std::vector<ManifestEntry> entries;
  std::set<std::string> outputs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw CliError(kExitInput, where + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw CliError(kExitInput, where + ": entry must be a JSON object");

    ManifestEntry entry;
    entry.input = require_string(obj, "input", where, true);
    entry.output = require_string(obj, "output", where, true);
    entry.label = require_string(obj, "label", where, false);
    if (const auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw CliError(kExitInput, where + ": \"id\" must be a string");
      entry.id = it->get<std::string>();
    } else {
      entry.id = std::to_string(lineno);
    }
    // Compare normalized paths so "a/./x.png" and "a/x.png" collide.
    const std::string key = fs::path(entry.output).lexically_normal().string();
    if (!outputs.insert(key).second) {
      throw CliError(kExitInput, where + ": duplicate output '" + entry.output + "'");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

int cmd_batch(const std::string& manifest, int jobs, const std::string& report_path,
              const Settings& settings) {
  const std::vector<ManifestEntry> entries = read_manifest(manifest);
  const ConfigPtr cfg = make_config(settings);
  const std::string report_file = report_path.empty() ? manifest + ".report.jsonl" : report_path;
  std::ofstream report(report_file, std::ios::trunc);
  if (!report) throw CliError(kExitOutput, "cannot write report '" + report_file + "'");

  std::mutex report_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const ManifestEntry& entry = entries[i];
      const Outcome outcome = run_entry(entry, cfg.get(), settings.bit_depth);
      if (!outcome.ok) ++failures;
      ordered_json line;
      line["id"] = entry.id;
      line["label"] = entry.label;
      line["input"] = entry.input;
      line["output"] = entry.output;
      line["status"] = outcome.ok ? "ok" : "error";
      line["error"] = outcome.ok ? ordered_json(nullptr) : ordered_json(outcome.error);
      line["width"] = outcome.width;
      line["height"] = outcome.height;
      line["elapsed_ms"] = outcome.elapsed_ms;
      const std::string text = line.dump();
      std::lock_guard lock(report_mutex);
      report << text << '\n';
      report.flush();
      if (!outcome.ok) std::cerr << "vsum: " << entry.id << ": " << outcome.error << '\n';
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), std::max<std::size_t>(entries.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (!report) throw CliError(kExitOutput, "cannot write report '" + report_file + "'");
  return failures.load() == 0 ? kExitOk : kExitPartial;
}

}  // namespace vsum_cli
