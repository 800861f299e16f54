#pragma once

// Generators, comparisons and scratch-directory helpers shared by the tests.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vsum/image.hpp"

namespace vsum::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Plane random_plane(Rng& rng, int w, int h, double lo = 0.0, double hi = 1.0) {
  Plane p(w, h);
  for (double& v : p.samples()) v = uniform(rng, lo, hi);
  return p;
}

inline Image random_image(Rng& rng, int w, int h, int channels) {
  std::vector<Plane> planes;
  for (int c = 0; c < channels; ++c) planes.push_back(random_plane(rng, w, h));
  return Image(std::move(planes));
}

/// Random size in [1, max_side] per axis and 1 or 3 channels.
inline Image random_shaped_image(Rng& rng, int max_side) {
  const int w = uniform_int(rng, 1, max_side);
  const int h = uniform_int(rng, 1, max_side);
  return random_image(rng, w, h, uniform_int(rng, 0, 1) == 0 ? 1 : 3);
}

/// Distance in units in the last place; 0 means bit-identical.
inline std::uint64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  if (std::isnan(a) || std::isnan(b)) return UINT64_MAX;
  auto key = [](double d) {
    std::int64_t i;
    std::memcpy(&i, &d, sizeof i);
    return i < 0 ? static_cast<std::uint64_t>(INT64_MIN) - static_cast<std::uint64_t>(i)
                 : static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(INT64_MIN);
  };
  const auto ka = key(a);
  const auto kb = key(b);
  return ka > kb ? ka - kb : kb - ka;
}

inline std::uint64_t max_ulp(const Image& a, const Image& b) {
  std::uint64_t worst = 0;
  for (int c = 0; c < a.channels(); ++c) {
    const auto sa = a.plane(c).samples();
    const auto sb = b.plane(c).samples();
    for (std::size_t i = 0; i < sa.size(); ++i) worst = std::max(worst, ulp_distance(sa[i], sb[i]));
  }
  return worst;
}

// |got - want| in units of the ulp at the largest operand magnitude. A
// difference of two samples followed by a sum cannot do better than that
// when the operands are much larger than the result.
inline double scaled_ulp_error(const Image& got, const Image& want,
                               const std::vector<const Image*>& operands) {
  double worst = 0.0;
  for (int c = 0; c < want.channels(); ++c) {
    for (std::size_t i = 0; i < want.plane(c).size(); ++i) {
      double scale = std::abs(want.plane(c).samples()[i]);
      for (const Image* op : operands) scale = std::max(scale, std::abs(op->plane(c).samples()[i]));
      const double ulp = std::nextafter(scale, INFINITY) - scale;
      const double err = std::abs(got.plane(c).samples()[i] - want.plane(c).samples()[i]);
      if (err > 0.0) worst = std::max(worst, err / ulp);
    }
  }
  return worst;
}

inline double max_abs_diff(const Plane& a, const Plane& b) {
  double worst = 0.0;
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) worst = std::max(worst, std::abs(sa[i] - sb[i]));
  return worst;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double worst = 0.0;
  for (int c = 0; c < a.channels(); ++c) worst = std::max(worst, max_abs_diff(a.plane(c), b.plane(c)));
  return worst;
}

/// Flat background with a bright square moving 2 px right per frame.
inline std::vector<Image> moving_square_video(int frames = 8, int width = 32, int height = 32,
                                              int top = 12, int side = 8, int left = 6) {
  const double bg[3] = {0.2, 0.3, 0.4};
  const double fg[3] = {0.9, 0.8, 0.1};
  std::vector<Image> out;
  for (int k = 0; k < frames; ++k) {
    std::vector<Plane> planes;
    for (int c = 0; c < 3; ++c) {
      Plane p(width, height, bg[c]);
      for (int y = top; y < top + side && y < height; ++y) {
        for (int x = left + 2 * k; x < left + 2 * k + side && x < width; ++x) p(x, y) = fg[c];
      }
      planes.push_back(std::move(p));
    }
    out.emplace_back(std::move(planes));
  }
  return out;
}

/// Removes itself on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vsum_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace vsum::testing
