#pragma once

#include <string>
#include <vector>

#include "settings.hpp"

namespace vsum_cli {

int cmd_summarize(const std::string& input, const std::string& output, const Settings& settings);

int cmd_inspect(const std::string& input, const std::string& outdir, const Settings& settings);

struct BenchArgs {
  std::string input;
  std::string methods = "all";
  int repeats = 1;
  std::string out;  // empty: stdout
  double alpha = 1.0;
  int iters = 100;
  int threads = 1;
};

int cmd_bench(const BenchArgs& args, const Settings& settings);

struct ManifestEntry {
  std::string input;
  std::string label;
  std::string output;
  std::string id;
};

/// Parses a JSON-lines manifest. Blank lines are skipped. Throws
/// CliError(kExitInput) on the first malformed line or a duplicated output.
std::vector<ManifestEntry> read_manifest(const std::string& path);

int cmd_batch(const std::string& manifest, int jobs, const std::string& report_path,
              const Settings& settings);

}  // namespace vsum_cli
