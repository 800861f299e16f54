#pragma once

#include "vsum/filters.hpp"
#include "vsum/image.hpp"

namespace vsum {

enum class BaseFilter { kWiener, kGaussian };

struct PipelineConfig {
  FilterConfig filter;
  /// Low-pass filter producing the base layer of each source.
  BaseFilter base_filter = BaseFilter::kWiener;
  /// Saliency sums below this floor give equal 0.5 / 0.5 weights.
  double epsilon_tie = 1e-12;

  void validate() const;
};

/// base + detail reproduces the source sample-wise.
struct DecompositionResult {
  Image base;
  Image detail;
};

/// One non-negative scalar per pixel.
struct SaliencyMap {
  Plane map;
};

/// Convex per-pixel weights: w1 + w2 == 1.
struct WeightMapPair {
  Plane w1;
  Plane w2;
};

/// Every intermediate of one summarize call, in pipeline order.
struct SummaryTrace {
  Image source1;
  Image source2;
  DecompositionResult layers1;
  DecompositionResult layers2;
  SaliencyMap saliency1;
  SaliencyMap saliency2;
  WeightMapPair weights;
  Image fused_base;
  Image fused_detail;
  Image fused;
};

DecompositionResult decompose(const Image& source, const PipelineConfig& cfg);

/// Per-pixel Euclidean norm across channels of LoG(source) - Wiener(source).
SaliencyMap saliency(const Image& source, const PipelineConfig& cfg);

WeightMapPair weight_maps(const SaliencyMap& s1, const SaliencyMap& s2, const PipelineConfig& cfg);

/// w1 * d1 + w2 * d2, weight planes broadcast over channels.
Image fuse_details(const Image& d1, const Image& d2, const WeightMapPair& w);

/// Pointwise mean of the two base layers.
Image fuse_bases(const Image& b1, const Image& b2);

/// base + detail, unclamped.
Image compose(const Image& base, const Image& detail);

/// Fuses two co-registered sources into one image.
Image summarize(const Image& a1, const Image& a2, const PipelineConfig& cfg);

/// summarize, keeping every intermediate.
SummaryTrace summarize_traced(const Image& a1, const Image& a2, const PipelineConfig& cfg);

/// Detail layer shifted by +0.5 for display.
Image detail_view(const Image& detail);

/// Saliency rescaled to [0, 1] by its own min and max; a flat map becomes 0.
Image saliency_view(const SaliencyMap& s);

/// Single-channel image holding one weight plane.
Image weight_view(const Plane& w);

}  // namespace vsum
