#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "handles.hpp"

namespace vsum_cli {

/// Fusion settings shared by summarize, batch, inspect and bench.
struct Settings {
  double sigma = 2.0;
  int wiener_window = 5;
  std::string base_filter = "wiener";
  std::string wiener_mode = "adaptive";
  double add_noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  double noise_variance = -1.0;  // < 0: estimate
  int bit_depth = 8;
  int threads = 1;
};

/// Reads a flat `key = value` config file. Keys match the long flag names with
/// '-' replaced by '_' (sigma, wiener_window, base_filter, wiener_mode,
/// add_noise_sigma, noise_seed, noise_variance, bit_depth, threads). Lines may
/// carry `#` comments; string values may be quoted; `[section]` headers are
/// ignored. Throws CliError(kExitInput) on unknown keys or bad values.
void apply_config_file(const std::filesystem::path& path, Settings& settings);

/// Registers the fusion flags on a subcommand. Values land in a staging copy so
/// that only flags actually given override the config file.
class SettingsFlags {
 public:
  void attach(CLI::App& app, bool with_bit_depth = true);

  /// Defaults, then --config file, then explicitly given flags.
  Settings resolve() const;

 private:
  Settings staged_;
  std::string config_path_;
  CLI::Option* config_opt_ = nullptr;
  CLI::Option* sigma_ = nullptr;
  CLI::Option* window_ = nullptr;
  CLI::Option* base_ = nullptr;
  CLI::Option* mode_ = nullptr;
  CLI::Option* noise_sigma_ = nullptr;
  CLI::Option* seed_ = nullptr;
  CLI::Option* variance_ = nullptr;
  CLI::Option* depth_ = nullptr;
  CLI::Option* threads_ = nullptr;
};

/// Builds a C API config from settings; throws CliError(kExitInput) when the
/// library rejects a value.
ConfigPtr make_config(const Settings& settings);

}  // namespace vsum_cli
