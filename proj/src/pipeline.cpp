#include "vsum/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vsum {

void PipelineConfig::validate() const {
  filter.validate();
  if (!(epsilon_tie > 0.0) || !std::isfinite(epsilon_tie)) {
    throw Error(ErrorCode::kParameter, "epsilon_tie must be > 0");
  }
}

namespace {

Image base_layer(const Image& source, const PipelineConfig& cfg) {
  if (cfg.base_filter == BaseFilter::kGaussian) {
    return gaussian_blur(source, cfg.filter.log_sigma, cfg.filter.threads);
  }
  return wiener(source, cfg.filter);
}

SaliencyMap saliency_from(const Image& log_response, const Image& wiener_response) {
  Plane map(log_response.width(), log_response.height());
  auto dst = map.samples();
  for (int c = 0; c < log_response.channels(); ++c) {
    auto l = log_response.plane(c).samples();
    auto w = wiener_response.plane(c).samples();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double d = l[i] - w[i];
      dst[i] += d * d;
    }
  }
  for (double& v : dst) v = std::sqrt(v);
  return {std::move(map)};
}

struct SourceAnalysis {
  DecompositionResult layers;
  SaliencyMap saliency;
};

// Same results as decompose() + saliency(), sharing the Wiener pass when the
// base layer is the Wiener output.
SourceAnalysis analyze(const Image& source, const PipelineConfig& cfg) {
  Image wiener_response = wiener(source, cfg.filter);
  const Image log_response = log_filter(source, cfg.filter.log_sigma, cfg.filter.threads);
  SaliencyMap sal = saliency_from(log_response, wiener_response);
  Image base = cfg.base_filter == BaseFilter::kWiener
                   ? std::move(wiener_response)
                   : gaussian_blur(source, cfg.filter.log_sigma, cfg.filter.threads);
  Image detail = elementwise(source, base, ArithOp::kSub);
  return {{std::move(base), std::move(detail)}, std::move(sal)};
}

}  // namespace

DecompositionResult decompose(const Image& source, const PipelineConfig& cfg) {
  cfg.validate();
  Image base = base_layer(source, cfg);
  Image detail = elementwise(source, base, ArithOp::kSub);
  return {std::move(base), std::move(detail)};
}

SaliencyMap saliency(const Image& source, const PipelineConfig& cfg) {
  cfg.validate();
  return saliency_from(log_filter(source, cfg.filter.log_sigma, cfg.filter.threads),
                       wiener(source, cfg.filter));
}

WeightMapPair weight_maps(const SaliencyMap& s1, const SaliencyMap& s2,
                          const PipelineConfig& cfg) {
  require_same_shape(s1.map, s2.map, "weight_maps");
  WeightMapPair w{Plane(s1.map.width(), s1.map.height()),
                  Plane(s1.map.width(), s1.map.height())};
  auto b1 = s1.map.samples();
  auto b2 = s2.map.samples();
  auto w1 = w.w1.samples();
  auto w2 = w.w2.samples();
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const double d = b1[i] + b2[i];
    if (d < cfg.epsilon_tie) {
      w1[i] = 0.5;
      w2[i] = 0.5;
    } else {
      w1[i] = b1[i] / d;
      w2[i] = b2[i] / d;
    }
  }
  return w;
}

Image fuse_details(const Image& d1, const Image& d2, const WeightMapPair& w) {
  require_same_shape(d1, d2, "fuse_details");
  require_same_shape(w.w1, w.w2, "fuse_details weights");
  require_same_shape(d1.plane(0), w.w1, "fuse_details weights");
  Image out(d1.width(), d1.height(), d1.channels());
  auto w1 = w.w1.samples();
  auto w2 = w.w2.samples();
  for (int c = 0; c < d1.channels(); ++c) {
    auto a = d1.plane(c).samples();
    auto b = d2.plane(c).samples();
    auto dst = out.plane(c).samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = w1[i] * a[i] + w2[i] * b[i];
  }
  return out;
}

Image fuse_bases(const Image& b1, const Image& b2) {
  require_same_shape(b1, b2, "fuse_bases");
  Image out(b1.width(), b1.height(), b1.channels());
  for (int c = 0; c < b1.channels(); ++c) {
    auto a = b1.plane(c).samples();
    auto b = b2.plane(c).samples();
    auto dst = out.plane(c).samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (a[i] + b[i]) / 2.0;
  }
  return out;
}

Image compose(const Image& base, const Image& detail) {
  require_same_shape(base, detail, "compose");
  return elementwise(base, detail, ArithOp::kAdd);
}

SummaryTrace summarize_traced(const Image& a1, const Image& a2, const PipelineConfig& cfg) {
  cfg.validate();
  require_same_shape(a1, a2, "summarize");
  SourceAnalysis first = analyze(a1, cfg);
  SourceAnalysis second = analyze(a2, cfg);
  WeightMapPair weights = weight_maps(first.saliency, second.saliency, cfg);
  Image fused_detail = fuse_details(first.layers.detail, second.layers.detail, weights);
  Image fused_base = fuse_bases(first.layers.base, second.layers.base);
  Image fused = compose(fused_base, fused_detail);
  return SummaryTrace{a1,
                      a2,
                      std::move(first.layers),
                      std::move(second.layers),
                      std::move(first.saliency),
                      std::move(second.saliency),
                      std::move(weights),
                      std::move(fused_base),
                      std::move(fused_detail),
                      std::move(fused)};
}

Image summarize(const Image& a1, const Image& a2, const PipelineConfig& cfg) {
  return std::move(summarize_traced(a1, a2, cfg).fused);
}

Image detail_view(const Image& detail) {
  Image out = detail;
  for (int c = 0; c < out.channels(); ++c) {
    for (double& v : out.plane(c).samples()) v += 0.5;
  }
  return out;
}

Image saliency_view(const SaliencyMap& s) {
  const auto samples = s.map.samples();
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double range = *hi - *lo;
  Plane out(s.map.width(), s.map.height());
  if (range > 0.0) {
    auto dst = out.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (samples[i] - *lo) / range;
  }
  return Image(std::vector<Plane>{std::move(out)});
}

Image weight_view(const Plane& w) { return Image(std::vector<Plane>{w}); }

}  // namespace vsum
