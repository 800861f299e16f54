#include "vsum/filters.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "parallel.hpp"

namespace vsum {

void FilterConfig::validate() const {
  if (!(log_sigma > 0.0) || !std::isfinite(log_sigma)) {
    throw Error(ErrorCode::kParameter, "log_sigma must be > 0, got " + std::to_string(log_sigma));
  }
  if (wiener_window < 3 || wiener_window % 2 == 0) {
    throw Error(ErrorCode::kParameter,
                "wiener_window must be odd and >= 3, got " + std::to_string(wiener_window));
  }
  if (!(added_noise_sigma >= 0.0) || !std::isfinite(added_noise_sigma)) {
    throw Error(ErrorCode::kParameter, "added_noise_sigma must be >= 0");
  }
  if (wiener_noise_variance &&
      (!(*wiener_noise_variance >= 0.0) || std::isnan(*wiener_noise_variance))) {
    throw Error(ErrorCode::kParameter, "wiener_noise_variance must be >= 0");
  }
  if (threads < 1) throw Error(ErrorCode::kParameter, "threads must be >= 1");
}

Kernel1D gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kParameter, "gaussian sigma must be > 0, got " + std::to_string(sigma));
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  Kernel1D k;
  k.taps.resize(static_cast<std::size_t>(2 * radius + 1));
  const double denom = 2.0 * sigma * sigma;
  for (int i = 0; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / denom);
    k.taps[static_cast<std::size_t>(radius + i)] = v;
    k.taps[static_cast<std::size_t>(radius - i)] = v;
  }
  // Pair the symmetric taps so the sum itself is symmetric in evaluation order.
  double sum = k.taps[static_cast<std::size_t>(radius)];
  for (int i = 1; i <= radius; ++i) sum += 2.0 * k.taps[static_cast<std::size_t>(radius + i)];
  for (auto& t : k.taps) t /= sum;
  return k;
}

Kernel2D outer(const Kernel1D& column, const Kernel1D& row) {
  Kernel2D k;
  k.width = static_cast<int>(row.taps.size());
  k.height = static_cast<int>(column.taps.size());
  k.taps.resize(static_cast<std::size_t>(k.width) * k.height);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      k.taps[static_cast<std::size_t>(y) * k.width + x] = column.taps[y] * row.taps[x];
    }
  }
  return k;
}

Plane convolve_separable(const Plane& p, const Kernel1D& k, int threads) {
  const int w = p.width();
  const int h = p.height();
  const int r = k.radius();
  const auto taps = std::span<const double>(k.taps);

  Plane tmp(w, h);
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto src = p.row(y);
      auto dst = tmp.row(y);
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i <= 2 * r; ++i) {
          acc += taps[i] * src[std::clamp(x + r - i, 0, w - 1)];
        }
        dst[x] = acc;
      }
    }
  });

  Plane out(w, h);
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto dst = out.row(y);
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i <= 2 * r; ++i) acc += taps[i] * tmp.clamped(x, y + r - i);
        dst[x] = acc;
      }
    }
  });
  return out;
}

Plane convolve_naive(const Plane& p, const Kernel2D& k) {
  const int rx = k.width / 2;
  const int ry = k.height / 2;
  Plane out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      double acc = 0.0;
      for (int j = 0; j < k.height; ++j) {
        for (int i = 0; i < k.width; ++i) {
          acc += k(i, j) * p.clamped(x + rx - i, y + ry - j);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

Plane laplacian(const Plane& p, int threads) {
  Plane out(p.width(), p.height());
  detail::parallel_rows(p.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < p.width(); ++x) {
        out(x, y) = p.clamped(x - 1, y) + p.clamped(x + 1, y) + p.clamped(x, y - 1) +
                    p.clamped(x, y + 1) - 4.0 * p(x, y);
      }
    }
  });
  return out;
}

Image gaussian_blur(const Image& img, double sigma, int threads) {
  const Kernel1D k = gaussian_kernel(sigma);
  std::vector<Plane> planes;
  for (const auto& p : img.planes()) planes.push_back(convolve_separable(p, k, threads));
  return Image(std::move(planes));
}

Image log_filter(const Image& img, double sigma, int threads) {
  const Kernel1D k = gaussian_kernel(sigma);
  std::vector<Plane> planes;
  for (const auto& p : img.planes()) {
    planes.push_back(laplacian(convolve_separable(p, k, threads), threads));
  }
  return Image(std::move(planes));
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  // mt19937_64 output is fully specified by the standard; the normal
  // transform is done here (Box-Muller) instead of std::normal_distribution,
  // whose algorithm varies across standard libraries.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double spare = 0.0;
  bool has_spare = false;
  auto normal = [&] {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
  };

  Image out = img;
  for (int c = 0; c < out.channels(); ++c) {
    for (double& v : out.plane(c).samples()) v += sigma * normal();
  }
  return out;
}

LocalStats local_statistics(const Plane& p, int window, int threads) {
  const int w = p.width();
  const int h = p.height();
  const int r = window / 2;
  const double n = static_cast<double>(window) * window;

  // Horizontal window sums of x and x^2, then vertical sums of those.
  Plane row_sum(w, h);
  Plane row_sq(w, h);
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto src = p.row(y);
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        double q = 0.0;
        for (int i = -r; i <= r; ++i) {
          const double v = src[std::clamp(x + i, 0, w - 1)];
          s += v;
          q += v * v;
        }
        row_sum(x, y) = s;
        row_sq(x, y) = q;
      }
    }
  });

  LocalStats stats{Plane(w, h), Plane(w, h)};
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        double q = 0.0;
        for (int j = -r; j <= r; ++j) {
          s += row_sum.clamped(x, y + j);
          q += row_sq.clamped(x, y + j);
        }
        const double mean = s / n;
        stats.mean(x, y) = mean;
        stats.variance(x, y) = std::max(q / n - mean * mean, 0.0);
      }
    }
  });
  return stats;
}

double estimate_noise_variance(const Plane& local_variance) {
  double sum = 0.0;
  for (double v : local_variance.samples()) sum += v;
  return sum / static_cast<double>(local_variance.size());
}

namespace {

constexpr double kTinyVariance = 1e-12;

Image maybe_add_noise(const Image& img, const FilterConfig& cfg) {
  if (cfg.added_noise_sigma > 0.0) {
    return add_gaussian_noise(img, cfg.added_noise_sigma, cfg.noise_seed);
  }
  return img;
}

Plane wiener_adaptive_plane(const Plane& noisy, const FilterConfig& cfg) {
  const LocalStats stats = local_statistics(noisy, cfg.wiener_window, cfg.threads);
  const double noise_var =
      cfg.wiener_noise_variance.value_or(estimate_noise_variance(stats.variance));

  Plane out(noisy.width(), noisy.height());
  detail::parallel_rows(noisy.height(), cfg.threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < noisy.width(); ++x) {
        const double mean = stats.mean(x, y);
        const double var = stats.variance(x, y);
        const double denom = std::max(var, noise_var);
        if (denom < kTinyVariance) {
          out(x, y) = mean;
        } else {
          out(x, y) = mean + (std::max(var - noise_var, 0.0) / denom) * (noisy(x, y) - mean);
        }
      }
    }
  });
  return out;
}

// fftw_plan creation and destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

Plane wiener_frequency_plane(const Plane& noisy, const FilterConfig& cfg) {
  const int w = noisy.width();
  const int h = noisy.height();
  const int half = w / 2 + 1;
  const auto real_count = static_cast<std::size_t>(w) * h;
  const auto spec_count = static_cast<std::size_t>(half) * h;

  double noise_var = 0.0;
  if (cfg.wiener_noise_variance) {
    noise_var = *cfg.wiener_noise_variance;
  } else {
    noise_var = estimate_noise_variance(
        local_statistics(noisy, cfg.wiener_window, cfg.threads).variance);
  }

  // fftw_malloc keeps alignment identical across calls, so FFTW picks the same
  // codelets every time and the output is bit-reproducible.
  std::unique_ptr<double, FftwFree> real(
      static_cast<double*>(fftw_malloc(sizeof(double) * real_count)));
  std::unique_ptr<fftw_complex, FftwFree> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spec_count)));
  if (!real || !spec) throw std::bad_alloc();

  PlanPtr forward;
  PlanPtr inverse;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward.reset(fftw_plan_dft_r2c_2d(h, w, real.get(), spec.get(), FFTW_ESTIMATE));
    inverse.reset(fftw_plan_dft_c2r_2d(h, w, spec.get(), real.get(), FFTW_ESTIMATE));
  }

  std::copy(noisy.samples().begin(), noisy.samples().end(), real.get());
  fftw_execute(forward.get());

  const double area = static_cast<double>(real_count);
  for (std::size_t i = 0; i < spec_count; ++i) {
    std::complex<double> f(spec.get()[i][0], spec.get()[i][1]);
    const double periodogram = std::norm(f) / area;
    const double signal = std::max(periodogram - noise_var, 0.0);
    const double denom = signal + noise_var;
    // denom is zero only when the coefficient itself is zero and there is no
    // noise, in which case any gain leaves it unchanged.
    const double gain = denom > 0.0 ? signal / denom : 1.0;
    spec.get()[i][0] *= gain;
    spec.get()[i][1] *= gain;
  }
  fftw_execute(inverse.get());

  Plane out(w, h);
  auto dst = out.samples();
  for (std::size_t i = 0; i < real_count; ++i) dst[i] = real.get()[i] / area;
  return out;
}

}  // namespace

Image wiener_adaptive(const Image& img, const FilterConfig& cfg) {
  cfg.validate();
  const Image noisy = maybe_add_noise(img, cfg);
  std::vector<Plane> planes;
  for (const auto& p : noisy.planes()) planes.push_back(wiener_adaptive_plane(p, cfg));
  return Image(std::move(planes));
}

Image wiener_frequency(const Image& img, const FilterConfig& cfg) {
  cfg.validate();
  const Image noisy = maybe_add_noise(img, cfg);
  std::vector<Plane> planes;
  for (const auto& p : noisy.planes()) planes.push_back(wiener_frequency_plane(p, cfg));
  return Image(std::move(planes));
}

Image wiener(const Image& img, const FilterConfig& cfg) {
  return cfg.wiener_mode == WienerMode::kFrequencyDomain ? wiener_frequency(img, cfg)
                                                         : wiener_adaptive(img, cfg);
}

}  // namespace vsum
