#include "vsum/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsum {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInputShape: return "input-shape error";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kNoFrames: return "no-frames error";
    case ErrorCode::kInconsistentFrames: return "inconsistent-frames error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kNoPairs: return "no-pairs error";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown error";
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInputShape, "raster dimensions must be positive, got " +
                                            std::to_string(width) + "x" + std::to_string(height));
  }
}

void check_channels(int channels) {
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInputShape,
                "channel count must be 1 or 3, got " + std::to_string(channels));
  }
}

template <typename T>
Image deinterleave(std::span<const T> raw, int width, int height, int channels, double scale) {
  check_dims(width, height);
  check_channels(channels);
  const auto pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (raw.size() != pixels * static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::kInputShape,
                "expected " + std::to_string(pixels * channels) + " samples, got " +
                    std::to_string(raw.size()));
  }
  Image img(width, height, channels);
  for (int c = 0; c < channels; ++c) {
    auto dst = img.plane(c).samples();
    for (std::size_t i = 0; i < pixels; ++i) {
      dst[i] = static_cast<double>(raw[i * channels + c]) / scale;
    }
  }
  return img;
}

}  // namespace

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane::Plane(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), data_(std::move(samples)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInputShape, "plane sample count does not match its dimensions");
  }
}

double Plane::clamped(int x, int y) const noexcept {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return (*this)(x, y);
}

Image::Image(int width, int height, int channels, double fill) {
  check_channels(channels);
  planes_.reserve(static_cast<std::size_t>(channels));
  for (int c = 0; c < channels; ++c) planes_.emplace_back(width, height, fill);
}

Image::Image(std::vector<Plane> planes) : planes_(std::move(planes)) {
  check_channels(static_cast<int>(planes_.size()));
  for (const auto& p : planes_) {
    if (!p.same_shape(planes_.front())) {
      throw Error(ErrorCode::kInputShape, "image planes differ in size");
    }
  }
}

Image image_from_bytes(std::span<const std::uint8_t> raw, int width, int height, int channels) {
  return deinterleave(raw, width, height, channels, 255.0);
}

Image image_from_words(std::span<const std::uint16_t> raw, int width, int height, int channels) {
  return deinterleave(raw, width, height, channels, 65535.0);
}

std::uint16_t quantize_sample(double value, BitDepth depth) noexcept {
  const double max = depth == BitDepth::k8 ? 255.0 : 65535.0;
  if (std::isnan(value)) return 0;
  const double v = std::clamp(value, 0.0, 1.0) * max;
  // std::round is half-away-from-zero; v is non-negative here.
  return static_cast<std::uint16_t>(std::round(v));
}

std::vector<std::uint16_t> image_to_samples(const Image& img, BitDepth depth) {
  const int channels = img.channels();
  const auto pixels = static_cast<std::size_t>(img.width()) * img.height();
  std::vector<std::uint16_t> out(pixels * channels);
  for (int c = 0; c < channels; ++c) {
    auto src = img.plane(c).samples();
    for (std::size_t i = 0; i < pixels; ++i) out[i * channels + c] = quantize_sample(src[i], depth);
  }
  return out;
}

std::vector<std::uint8_t> image_to_bytes(const Image& img) {
  const auto wide = image_to_samples(img, BitDepth::k8);
  return {wide.begin(), wide.end()};
}

void require_same_shape(const Plane& a, const Plane& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kInputShape,
                std::string(what) + ": shape mismatch " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.channels() != b.channels()) {
    throw Error(ErrorCode::kInputShape, std::string(what) + ": channel count mismatch " +
                                            std::to_string(a.channels()) + " vs " +
                                            std::to_string(b.channels()));
  }
  require_same_shape(a.plane(0), b.plane(0), what);
}

Plane elementwise(const Plane& a, const Plane& b, ArithOp op) {
  require_same_shape(a, b, "elementwise");
  Plane out(a.width(), a.height());
  auto x = a.samples();
  auto y = b.samples();
  auto z = out.samples();
  switch (op) {
    case ArithOp::kAdd:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
      break;
    case ArithOp::kSub:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] - y[i];
      break;
    case ArithOp::kMul:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
      break;
  }
  return out;
}

Image elementwise(const Image& a, const Image& b, ArithOp op) {
  require_same_shape(a, b, "elementwise");
  std::vector<Plane> planes;
  planes.reserve(static_cast<std::size_t>(a.channels()));
  for (int c = 0; c < a.channels(); ++c) planes.push_back(elementwise(a.plane(c), b.plane(c), op));
  return Image(std::move(planes));
}

bool all_finite(const Plane& p) noexcept {
  return std::all_of(p.samples().begin(), p.samples().end(),
                     [](double v) { return std::isfinite(v); });
}

bool all_finite(const Image& img) noexcept {
  return std::all_of(img.planes().begin(), img.planes().end(),
                     [](const Plane& p) { return all_finite(p); });
}

}  // namespace vsum
