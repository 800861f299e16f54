#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "support.hpp"
#include "vsum/error.hpp"
#include "vsum/filters.hpp"

namespace vsum {
namespace {

using testing::max_abs_diff;
using testing::Rng;

// Values from an independent numpy evaluation of the normalized Gaussian.
TEST(GaussianKernel, FrozenTaps) {
  const Kernel1D k05 = gaussian_kernel(0.5);
  ASSERT_EQ(k05.taps.size(), 5u);
  EXPECT_EQ(k05.radius(), 2);
  EXPECT_NEAR(k05.taps[2], 0.7865707258873422, 1e-15);
  EXPECT_NEAR(k05.taps[1], 0.10645077197359151, 1e-15);
  EXPECT_EQ(gaussian_kernel(1.0).radius(), 3);
  EXPECT_NEAR(gaussian_kernel(1.0).taps[3], 0.3990502796524549, 1e-15);
  EXPECT_EQ(gaussian_kernel(1.5).radius(), 5);
  EXPECT_NEAR(gaussian_kernel(1.5).taps[5], 0.26601172486179436, 1e-15);
  EXPECT_EQ(gaussian_kernel(2.0).radius(), 6);
  EXPECT_NEAR(gaussian_kernel(2.0).taps[6], 0.19967562749792112, 1e-15);
}

TEST(GaussianKernel, PositiveSymmetricNormalized) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const double sigma = testing::uniform(rng, 0.05, 8.0);
    const Kernel1D k = gaussian_kernel(sigma);
    double sum = 0.0;
    for (std::size_t i = 0; i < k.taps.size(); ++i) {
      EXPECT_GT(k.taps[i], 0.0);
      EXPECT_EQ(k.taps[i], k.taps[k.taps.size() - 1 - i]);
      sum += k.taps[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9) << sigma;
    EXPECT_EQ(k.radius(), static_cast<int>(std::ceil(3.0 * sigma)));
  }
  EXPECT_THROW(gaussian_kernel(0.0), Error);
  EXPECT_THROW(gaussian_kernel(-1.0), Error);
}

TEST(Convolve, ConstantAndIdentity) {
  const Plane c(9, 7, 0.37);
  const Plane out = convolve_separable(c, gaussian_kernel(1.7));
  for (double v : out.samples()) EXPECT_NEAR(v, 0.37, 1e-9);

  Rng rng(22);
  const Plane p = testing::random_plane(rng, 11, 6);
  EXPECT_EQ(convolve_separable(p, Kernel1D{{1.0}}), p);
  EXPECT_EQ(convolve_naive(p, Kernel2D{}), p);
  const Plane zero = convolve_naive(p, Kernel2D{3, 3, std::vector<double>(9, 0.0)});
  for (double v : zero.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Convolve, NaiveIsTrueConvolution) {
  // A one-sided kernel shifts the plane; flipping direction tells
  // convolution from correlation.
  Plane p(5, 1, std::vector<double>{0, 0, 1, 0, 0});
  const Plane out = convolve_naive(p, Kernel2D{3, 1, {1.0, 0.0, 0.0}});
  EXPECT_EQ(out(1, 0), 1.0);
  EXPECT_EQ(out(3, 0), 0.0);
  EXPECT_EQ(out(2, 0), 0.0);
}

TEST(Convolve, SeparableMatchesNaive) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = testing::uniform_int(rng, 1, 32);
    const int h = testing::uniform_int(rng, 1, 32);
    const Plane p = testing::random_plane(rng, w, h);
    const Kernel1D k = gaussian_kernel(testing::uniform(rng, 0.3, 3.0));
    EXPECT_LE(max_abs_diff(convolve_separable(p, k), convolve_naive(p, outer(k, k))), 1e-6);
  }
  const Plane p16 = testing::random_plane(rng, 16, 16);
  const Kernel1D k = gaussian_kernel(1.5);
  EXPECT_LE(max_abs_diff(convolve_separable(p16, k), convolve_naive(p16, outer(k, k))), 1e-6);
}

TEST(Convolve, ThreadCountDoesNotChangeBits) {
  Rng rng(24);
  const Plane p = testing::random_plane(rng, 37, 29);
  const Kernel1D k = gaussian_kernel(2.0);
  const Plane ref = convolve_separable(p, k, 1);
  for (int t : {2, 3, 8}) EXPECT_EQ(convolve_separable(p, k, t), ref);
  EXPECT_EQ(laplacian(p, 5), laplacian(p, 1));
}

Image constant_image(int w, int h, int c, double v) { return Image(w, h, c, v); }

TEST(LoG, ConstantGivesZero) {
  for (double sigma : {0.5, 1.0, 2.0, 3.5}) {
    const Image out = log_filter(constant_image(13, 9, 3, 0.61), sigma);
    for (const auto& pl : out.planes()) {
      for (double v : pl.samples()) EXPECT_NEAR(v, 0.0, 1e-9);
    }
  }
}

TEST(LoG, AffineRampInteriorIsZero) {
  const int w = 40;
  const int h = 30;
  const double sigma = 2.0;
  const int margin = static_cast<int>(std::ceil(3 * sigma)) + 1;
  Plane ramp(w, h);
  Plane tilted(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      ramp(x, y) = static_cast<double>(x) / w;
      tilted(x, y) = 0.1 + 0.01 * x - 0.02 * y;
    }
  }
  for (const Plane& p : {ramp, tilted}) {
    const Image out = log_filter(Image(std::vector<Plane>{p}), sigma);
    for (int y = margin; y < h - margin; ++y) {
      for (int x = margin; x < w - margin; ++x) EXPECT_NEAR(out.plane(0)(x, y), 0.0, 1e-6);
    }
  }
}

// Composes the 5-point Laplacian with the Gaussian into one explicit kernel.
Kernel2D composed_log_kernel(double sigma) {
  const Kernel2D g = outer(gaussian_kernel(sigma), gaussian_kernel(sigma));
  Kernel2D k;
  k.width = g.width + 2;
  k.height = g.height + 2;
  k.taps.assign(static_cast<std::size_t>(k.width) * k.height, 0.0);
  auto at = [&](int x, int y) -> double& { return k.taps[static_cast<std::size_t>(y) * k.width + x]; };
  const int dx[] = {0, 1, -1, 0, 0};
  const int dy[] = {0, 0, 0, 1, -1};
  const double wt[] = {-4, 1, 1, 1, 1};
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      for (int s = 0; s < 5; ++s) at(i + 1 + dx[s], j + 1 + dy[s]) += wt[s] * g(i, j);
    }
  }
  return k;
}

TEST(LoG, ImpulseMatchesComposedKernel) {
  Plane p(9, 9, 0.0);
  p(4, 4) = 1.0;
  const Image out = log_filter(Image(std::vector<Plane>{p}), 1.0);
  Plane padded(31, 31, 0.0);
  padded(15, 15) = 1.0;
  const Plane oracle = convolve_naive(padded, composed_log_kernel(1.0));
  // The impulse sits more than one kernel radius from every edge, so
  // replicated borders only ever read zeros.
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) EXPECT_NEAR(out.plane(0)(x, y), oracle(x + 11, y + 11), 1e-6);
  }
  const Image wide = log_filter(Image(std::vector<Plane>{padded}), 1.0);
  EXPECT_LE(max_abs_diff(wide.plane(0), oracle), 1e-6);
  double sum = 0.0;
  for (double v : wide.plane(0).samples()) sum += v;
  EXPECT_NEAR(sum, 0.0, 1e-6);
}

TEST(LocalStatistics, MatchesDirectWindow) {
  Rng rng(25);
  const Plane p = testing::random_plane(rng, 9, 7);
  const LocalStats s = local_statistics(p, 5);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) {
      double m = 0.0;
      for (int j = -2; j <= 2; ++j)
        for (int i = -2; i <= 2; ++i) m += p.clamped(x + i, y + j);
      m /= 25.0;
      double v = 0.0;
      for (int j = -2; j <= 2; ++j)
        for (int i = -2; i <= 2; ++i) v += (p.clamped(x + i, y + j) - m) * (p.clamped(x + i, y + j) - m);
      v /= 25.0;
      EXPECT_NEAR(s.mean(x, y), m, 1e-12);
      EXPECT_NEAR(s.variance(x, y), v, 1e-12);
      EXPECT_GE(s.variance(x, y), 0.0);
    }
  }
}

// Per-pixel oracle straight from the gain formula.
Plane wiener_oracle(const Plane& p, int window, std::optional<double> nu2) {
  const int r = window / 2;
  Plane mean(p.width(), p.height());
  Plane var(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      double m = 0.0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) m += p.clamped(x + i, y + j);
      m /= window * window;
      double v = 0.0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) v += std::pow(p.clamped(x + i, y + j) - m, 2);
      mean(x, y) = m;
      var(x, y) = v / (window * window);
    }
  }
  double noise = 0.0;
  if (nu2) {
    noise = *nu2;
  } else {
    for (double v : var.samples()) noise += v;
    noise /= static_cast<double>(var.size());
  }
  Plane out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      const double s2 = var(x, y);
      const double den = std::max(s2, noise);
      out(x, y) = den < 1e-12 ? mean(x, y)
                              : mean(x, y) + std::max(s2 - noise, 0.0) / den * (p(x, y) - mean(x, y));
    }
  }
  return out;
}

TEST(WienerAdaptive, MatchesDirectOracle) {
  Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane p = testing::random_plane(rng, 8, 8);
    FilterConfig cfg;
    cfg.wiener_window = 3;
    cfg.wiener_noise_variance = 0.01;
    const Image out = wiener_adaptive(Image(std::vector<Plane>{p}), cfg);
    EXPECT_LE(max_abs_diff(out.plane(0), wiener_oracle(p, 3, 0.01)), 1e-6);

    cfg.wiener_window = 5;
    cfg.wiener_noise_variance.reset();
    const Image est = wiener_adaptive(Image(std::vector<Plane>{p}), cfg);
    EXPECT_LE(max_abs_diff(est.plane(0), wiener_oracle(p, 5, std::nullopt)), 1e-6);
  }
}

TEST(WienerAdaptive, ConstantIsFixpoint) {
  const Image c = constant_image(10, 6, 3, 0.42);
  FilterConfig cfg;
  const Image once = wiener_adaptive(c, cfg);
  EXPECT_LE(max_abs_diff(once, c), 1e-9);
  EXPECT_LE(max_abs_diff(wiener_adaptive(once, cfg), c), 1e-9);
}

TEST(WienerAdaptive, HugeNoiseGivesLocalMean) {
  Rng rng(27);
  const Plane p = testing::random_plane(rng, 12, 10);
  FilterConfig cfg;
  cfg.wiener_noise_variance = 1e12;
  const Image out = wiener_adaptive(Image(std::vector<Plane>{p}), cfg);
  EXPECT_LE(max_abs_diff(out.plane(0), local_statistics(p, 5).mean), 1e-6);
}

TEST(WienerAdaptive, OutputBetweenSampleAndLocalMean) {
  Rng rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane p = testing::random_plane(rng, testing::uniform_int(rng, 1, 20),
                                          testing::uniform_int(rng, 1, 20));
    FilterConfig cfg;
    cfg.wiener_window = 3 + 2 * testing::uniform_int(rng, 0, 2);
    if (trial % 2) cfg.wiener_noise_variance = testing::uniform(rng, 0.0, 0.1);
    const Plane out = wiener_adaptive(Image(std::vector<Plane>{p}), cfg).plane(0);
    const Plane mean = local_statistics(p, cfg.wiener_window).mean;
    for (int y = 0; y < p.height(); ++y) {
      for (int x = 0; x < p.width(); ++x) {
        const double lo = std::min(p(x, y), mean(x, y));
        const double hi = std::max(p(x, y), mean(x, y));
        EXPECT_GE(out(x, y), lo - 1e-12);
        EXPECT_LE(out(x, y), hi + 1e-12);
      }
    }
  }
}

TEST(WienerAdaptive, ShiftEquivariantInInterior) {
  Rng rng(29);
  const int w = 30, h = 24, dx = 3, dy = 2;
  const Plane p = testing::random_plane(rng, w + dx, h + dy);
  Plane shifted(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) shifted(x, y) = p(x + dx, y + dy);
  FilterConfig cfg;
  cfg.wiener_noise_variance = 0.02;  // a global estimate would differ between crops
  const Plane a = wiener_adaptive(Image(std::vector<Plane>{p}), cfg).plane(0);
  const Plane b = wiener_adaptive(Image(std::vector<Plane>{shifted}), cfg).plane(0);
  const int m = cfg.wiener_window / 2;
  for (int y = m; y < h - m; ++y)
    for (int x = m; x < w - m; ++x) EXPECT_NEAR(b(x, y), a(x + dx, y + dy), 1e-6);
}

TEST(Filters, GaussianAndLoGShiftEquivariantInInterior) {
  Rng rng(30);
  const int w = 40, h = 36, dx = 5, dy = 4;
  const Plane p = testing::random_plane(rng, w + dx, h + dy);
  Plane shifted(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) shifted(x, y) = p(x + dx, y + dy);
  const double sigma = 1.5;
  const int m = static_cast<int>(std::ceil(3 * sigma)) + 1;
  const Image a = log_filter(Image(std::vector<Plane>{p}), sigma);
  const Image b = log_filter(Image(std::vector<Plane>{shifted}), sigma);
  const Image ga = gaussian_blur(Image(std::vector<Plane>{p}), sigma);
  const Image gb = gaussian_blur(Image(std::vector<Plane>{shifted}), sigma);
  for (int y = m; y < h - m; ++y) {
    for (int x = m; x < w - m; ++x) {
      EXPECT_NEAR(b.plane(0)(x, y), a.plane(0)(x + dx, y + dy), 1e-6);
      EXPECT_NEAR(gb.plane(0)(x, y), ga.plane(0)(x + dx, y + dy), 1e-6);
    }
  }
}

FilterConfig frequency_config(std::optional<double> nu2) {
  FilterConfig cfg;
  cfg.wiener_mode = WienerMode::kFrequencyDomain;
  cfg.wiener_noise_variance = nu2;
  return cfg;
}

TEST(WienerFrequency, ZeroNoiseRoundTrip) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Image img = testing::random_image(rng, testing::uniform_int(rng, 1, 33),
                                            testing::uniform_int(rng, 1, 33), 3);
    EXPECT_LE(max_abs_diff(wiener_frequency(img, frequency_config(0.0)), img), 1e-9);
  }
  const Image e = testing::random_image(rng, 8, 8, 1);
  EXPECT_LE(max_abs_diff(wiener(e, frequency_config(0.0)), e), 1e-9);
}

TEST(WienerFrequency, ConstantStaysConstant) {
  const Image c = constant_image(16, 12, 1, 0.3);
  for (double nu2 : {0.0, 1e-4, 0.01, 1.0}) {
    const Image out = wiener_frequency(c, frequency_config(nu2));
    const double first = out.plane(0)(0, 0);
    for (double v : out.plane(0).samples()) EXPECT_NEAR(v, first, 1e-6);
  }
}

// Naive 2-D DFT, independent of the library's transform.
std::vector<std::complex<double>> dft(const Plane& p) {
  const int w = p.width(), h = p.height();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(w) * h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      std::complex<double> acc = 0.0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double ang = -2.0 * std::numbers::pi * (static_cast<double>(u * x) / w +
                                                        static_cast<double>(v * y) / h);
          acc += p(x, y) * std::polar(1.0, ang);
        }
      }
      out[static_cast<std::size_t>(v) * w + u] = acc;
    }
  }
  return out;
}

TEST(WienerFrequency, GainWithinUnitInterval) {
  Rng rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Plane p = testing::random_plane(rng, 8, 8);
    const Plane out = wiener_frequency(Image(std::vector<Plane>{p}), frequency_config(0.01)).plane(0);
    const auto fin = dft(p);
    const auto fout = dft(out);
    for (std::size_t i = 0; i < fin.size(); ++i) {
      const double a = std::abs(fin[i]);
      const double b = std::abs(fout[i]);
      EXPECT_LE(b, a + 1e-9);
      if (a > 1e-9) {
        // Same phase: the gain is a real factor.
        EXPECT_NEAR(std::abs(fout[i] - fin[i] * (b / a)), 0.0, 1e-9);
      }
    }
  }
}

TEST(WienerFrequency, CircularShiftEquivariant) {
  Rng rng(33);
  const int w = 16, h = 12, dx = 5, dy = 3;
  const Plane p = testing::random_plane(rng, w, h);
  Plane rolled(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) rolled(x, y) = p((x + dx) % w, (y + dy) % h);
  const Plane a = wiener_frequency(Image(std::vector<Plane>{p}), frequency_config(0.01)).plane(0);
  const Plane b = wiener_frequency(Image(std::vector<Plane>{rolled}), frequency_config(0.01)).plane(0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) EXPECT_NEAR(b(x, y), a((x + dx) % w, (y + dy) % h), 1e-6);
}

TEST(Noise, SeededAndReproducible) {
  const Image c = constant_image(20, 20, 3, 0.5);
  const Image a = add_gaussian_noise(c, 0.1, 7);
  EXPECT_EQ(a, add_gaussian_noise(c, 0.1, 7));
  EXPECT_NE(a, add_gaussian_noise(c, 0.1, 8));
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (const auto& pl : a.planes()) {
    for (double v : pl.samples()) {
      sum += v - 0.5;
      sq += (v - 0.5) * (v - 0.5);
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(std::sqrt(sq / n), 0.1, 0.01);
}

TEST(Filters, DeterministicAcrossThreadCounts) {
  Rng rng(34);
  const Image img = testing::random_image(rng, 45, 31, 3);
  for (WienerMode mode : {WienerMode::kSpatialAdaptive, WienerMode::kFrequencyDomain}) {
    FilterConfig cfg;
    cfg.wiener_mode = mode;
    cfg.added_noise_sigma = 0.05;
    cfg.noise_seed = 99;
    const Image ref = wiener(img, cfg);
    for (int t : {2, 4, 7}) {
      cfg.threads = t;
      EXPECT_EQ(wiener(img, cfg), ref);
    }
  }
  EXPECT_EQ(log_filter(img, 2.0, 3), log_filter(img, 2.0, 1));
}

TEST(FilterConfig, Validation) {
  FilterConfig ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = [](auto mutate) {
    FilterConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kParameter;
    }
    return false;
  };
  EXPECT_TRUE(bad([](FilterConfig& c) { c.log_sigma = 0; }));
  EXPECT_TRUE(bad([](FilterConfig& c) { c.wiener_window = 4; }));
  EXPECT_TRUE(bad([](FilterConfig& c) { c.wiener_window = 1; }));
  EXPECT_TRUE(bad([](FilterConfig& c) { c.added_noise_sigma = -0.1; }));
  EXPECT_TRUE(bad([](FilterConfig& c) { c.wiener_noise_variance = -1.0; }));
  EXPECT_TRUE(bad([](FilterConfig& c) { c.threads = 0; }));
}

}  // namespace
}  // namespace vsum
