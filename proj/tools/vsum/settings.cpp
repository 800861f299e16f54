#include "settings.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

namespace vsum_cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw CliError(kExitInput, where + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::string unquote(std::string_view v, const std::string& where) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  if (!v.empty() && (v.front() == '"' || v.back() == '"')) {
    throw CliError(kExitInput, where + ": unbalanced quotes");
  }
  return std::string(v);
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitInput, "cannot read config file '" + path.string() + "'");
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw CliError(kExitInput, where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(trim(line.substr(eq + 1)), where);

    if (key == "sigma") {
      s.sigma = parse_number<double>(value, where);
    } else if (key == "wiener_window") {
      s.wiener_window = parse_number<int>(value, where);
    } else if (key == "base_filter") {
      s.base_filter = value;
    } else if (key == "wiener_mode") {
      s.wiener_mode = value;
    } else if (key == "add_noise_sigma") {
      s.add_noise_sigma = parse_number<double>(value, where);
    } else if (key == "noise_seed") {
      s.noise_seed = parse_number<std::uint64_t>(value, where);
    } else if (key == "noise_variance") {
      s.noise_variance = parse_number<double>(value, where);
    } else if (key == "bit_depth") {
      s.bit_depth = parse_number<int>(value, where);
    } else if (key == "threads") {
      s.threads = parse_number<int>(value, where);
    } else {
      throw CliError(kExitInput, where + ": unknown key '" + key + "'");
    }
  }
}

void SettingsFlags::attach(CLI::App& app, bool with_bit_depth) {
  config_opt_ = app.add_option("--config", config_path_, "Config file (key = value); flags override it");
  sigma_ = app.add_option("--sigma", staged_.sigma, "Gaussian sigma of the LoG filter")
               ->capture_default_str();
  window_ = app.add_option("--wiener-window", staged_.wiener_window, "Odd Wiener window side")
                ->capture_default_str();
  base_ = app.add_option("--base-filter", staged_.base_filter, "Base layer filter")
              ->check(CLI::IsMember({"wiener", "gaussian"}))
              ->capture_default_str();
  mode_ = app.add_option("--wiener-mode", staged_.wiener_mode, "Wiener filter form")
              ->check(CLI::IsMember({"adaptive", "frequency"}))
              ->capture_default_str();
  noise_sigma_ = app.add_option("--add-noise-sigma", staged_.add_noise_sigma,
                                "Std-dev of Gaussian noise injected before Wiener filtering")
                     ->capture_default_str();
  seed_ = app.add_option("--noise-seed", staged_.noise_seed, "Seed of the injected noise")
              ->capture_default_str();
  variance_ = app.add_option("--noise-variance", staged_.noise_variance,
                             "Explicit Wiener noise variance (negative: estimate)");
  if (with_bit_depth) {
    depth_ = app.add_option("--bit-depth", staged_.bit_depth, "Output bit depth")
                 ->check(CLI::IsMember({8, 16}))
                 ->capture_default_str();
  }
  threads_ = app.add_option("--threads", staged_.threads, "Worker threads inside one fusion")
                 ->check(CLI::PositiveNumber)
                 ->capture_default_str();
}

Settings SettingsFlags::resolve() const {
  Settings s;
  if (config_opt_ && config_opt_->count() > 0) apply_config_file(config_path_, s);
  auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
  if (given(sigma_)) s.sigma = staged_.sigma;
  if (given(window_)) s.wiener_window = staged_.wiener_window;
  if (given(base_)) s.base_filter = staged_.base_filter;
  if (given(mode_)) s.wiener_mode = staged_.wiener_mode;
  if (given(noise_sigma_)) s.add_noise_sigma = staged_.add_noise_sigma;
  if (given(seed_)) s.noise_seed = staged_.noise_seed;
  if (given(variance_)) s.noise_variance = staged_.noise_variance;
  if (given(depth_)) s.bit_depth = staged_.bit_depth;
  if (given(threads_)) s.threads = staged_.threads;
  if (s.bit_depth != 8 && s.bit_depth != 16) {
    throw CliError(kExitInput, "bit depth must be 8 or 16, got " + std::to_string(s.bit_depth));
  }
  return s;
}

ConfigPtr make_config(const Settings& s) {
  vsum_config* raw = nullptr;
  check(vsum_config_create(&raw), kExitInput, "config");
  ConfigPtr cfg(raw);
  check(vsum_config_set_log_sigma(raw, s.sigma), kExitInput, "--sigma");
  check(vsum_config_set_wiener_window(raw, s.wiener_window), kExitInput, "--wiener-window");
  if (s.base_filter != "wiener" && s.base_filter != "gaussian") {
    throw CliError(kExitInput, "unknown base filter '" + s.base_filter + "'");
  }
  check(vsum_config_set_base_filter(
            raw, s.base_filter == "gaussian" ? VSUM_BASE_GAUSSIAN : VSUM_BASE_WIENER),
        kExitInput, "--base-filter");
  if (s.wiener_mode != "adaptive" && s.wiener_mode != "frequency") {
    throw CliError(kExitInput, "unknown wiener mode '" + s.wiener_mode + "'");
  }
  check(vsum_config_set_wiener_mode(
            raw, s.wiener_mode == "frequency" ? VSUM_WIENER_FREQUENCY : VSUM_WIENER_ADAPTIVE),
        kExitInput, "--wiener-mode");
  check(vsum_config_set_added_noise_sigma(raw, s.add_noise_sigma), kExitInput, "--add-noise-sigma");
  check(vsum_config_set_noise_seed(raw, s.noise_seed), kExitInput, "--noise-seed");
  check(vsum_config_set_wiener_noise_variance(raw, s.noise_variance), kExitInput,
        "--noise-variance");
  check(vsum_config_set_threads(raw, s.threads), kExitInput, "--threads");
  return cfg;
}

}  // namespace vsum_cli
