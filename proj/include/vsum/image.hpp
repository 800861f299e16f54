#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vsum/error.hpp"

namespace vsum {

/// Single channel raster of double samples, row-major.
class Plane {
 public:
  Plane(int width, int height, double fill = 0.0);
  Plane(int width, int height, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& operator()(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  /// Sample at (x, y) with coordinates clamped into the raster (edge replication).
  double clamped(int x, int y) const noexcept;

  std::span<const double> samples() const noexcept { return data_; }
  std::span<double> samples() noexcept { return data_; }
  std::span<const double> row(int y) const noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<double> row(int y) noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> data_;
};

/// Planar raster with 1 or 3 channels. Nominal range is [0, 1]; intermediate
/// layers (details, differences) may leave that range and are only clamped on
/// export.
class Image {
 public:
  Image(int width, int height, int channels, double fill = 0.0);
  explicit Image(std::vector<Plane> planes);

  int width() const noexcept { return planes_.front().width(); }
  int height() const noexcept { return planes_.front().height(); }
  int channels() const noexcept { return static_cast<int>(planes_.size()); }

  const Plane& plane(int c) const { return planes_.at(static_cast<std::size_t>(c)); }
  Plane& plane(int c) { return planes_.at(static_cast<std::size_t>(c)); }
  const std::vector<Plane>& planes() const noexcept { return planes_; }

  bool same_shape(const Image& other) const noexcept {
    return channels() == other.channels() && planes_.front().same_shape(other.planes_.front());
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::vector<Plane> planes_;
};

enum class BitDepth { k8 = 8, k16 = 16 };

enum class ArithOp { kAdd, kSub, kMul };

/// 8-bit interleaved samples to planar [0, 1] doubles, sample/255 exactly.
Image image_from_bytes(std::span<const std::uint8_t> raw, int width, int height, int channels);

/// 16-bit interleaved samples to planar [0, 1] doubles, sample/65535.
Image image_from_words(std::span<const std::uint16_t> raw, int width, int height, int channels);

/// Clamp to [0, 1], scale to the depth's maximum, round half away from zero.
/// Output is interleaved; each element holds one quantized sample.
std::vector<std::uint16_t> image_to_samples(const Image& img, BitDepth depth);

/// 8-bit convenience form of image_to_samples.
std::vector<std::uint8_t> image_to_bytes(const Image& img);

std::uint16_t quantize_sample(double value, BitDepth depth) noexcept;

Plane elementwise(const Plane& a, const Plane& b, ArithOp op);
Image elementwise(const Image& a, const Image& b, ArithOp op);

/// Throws kInputShape unless both images share width, height and channel count.
void require_same_shape(const Image& a, const Image& b, const char* what);
void require_same_shape(const Plane& a, const Plane& b, const char* what);

bool all_finite(const Plane& p) noexcept;
bool all_finite(const Image& img) noexcept;

}  // namespace vsum
