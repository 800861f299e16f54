#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vsum/image.hpp"

namespace vsum {

/// Odd-length symmetric 1-D kernel.
struct Kernel1D {
  std::vector<double> taps;

  int radius() const noexcept { return static_cast<int>(taps.size() / 2); }
};

/// Dense 2-D kernel with odd width and height, row-major.
struct Kernel2D {
  int width = 1;
  int height = 1;
  std::vector<double> taps{1.0};

  double operator()(int x, int y) const noexcept {
    return taps[static_cast<std::size_t>(y) * width + x];
  }
};

enum class WienerMode { kSpatialAdaptive, kFrequencyDomain };

struct FilterConfig {
  /// Gaussian standard deviation (pixels) of the smoothing inside the LoG.
  double log_sigma = 2.0;
  /// Side of the square neighborhood used for local Wiener statistics.
  int wiener_window = 5;
  /// Noise variance in sample^2 units. Unset means: mean of local variances.
  std::optional<double> wiener_noise_variance;
  /// Std-dev of synthetic Gaussian noise injected before Wiener filtering.
  double added_noise_sigma = 0.0;
  WienerMode wiener_mode = WienerMode::kSpatialAdaptive;
  std::uint64_t noise_seed = 0;
  /// Row-parallel worker count; results are identical for every value.
  int threads = 1;

  /// Throws Error(kParameter) when a field is out of range.
  void validate() const;
};

Kernel1D gaussian_kernel(double sigma);

Kernel2D outer(const Kernel1D& column, const Kernel1D& row);

/// Horizontal then vertical pass, edge replication at the borders.
Plane convolve_separable(const Plane& p, const Kernel1D& k, int threads = 1);

/// Direct 2-D convolution with edge replication. Reference path for tests and
/// for kernels that do not factor.
Plane convolve_naive(const Plane& p, const Kernel2D& k);

/// 5-point discrete Laplacian (center -4, axial neighbors +1), edge replication.
Plane laplacian(const Plane& p, int threads = 1);

Image gaussian_blur(const Image& img, double sigma, int threads = 1);

/// Laplacian of the Gaussian-smoothed image, per channel. Output is signed.
Image log_filter(const Image& img, double sigma, int threads = 1);

/// Adds zero-mean Gaussian noise drawn from a seeded generator. The noise
/// sequence depends only on the seed and the image shape.
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// Per-pixel mean and population variance over a window x window neighborhood.
struct LocalStats {
  Plane mean;
  Plane variance;
};
LocalStats local_statistics(const Plane& p, int window, int threads = 1);

/// Mean of all local variances, summed in row-major order.
double estimate_noise_variance(const Plane& local_variance);

/// Locally adaptive spatial Wiener filter.
Image wiener_adaptive(const Image& img, const FilterConfig& cfg);

/// Wiener gain applied to the 2-D DFT of each channel.
Image wiener_frequency(const Image& img, const FilterConfig& cfg);

/// Dispatches on cfg.wiener_mode.
Image wiener(const Image& img, const FilterConfig& cfg);

}  // namespace vsum
