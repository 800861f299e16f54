#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vsum/image.hpp"
#include "vsum/ingest.hpp"
#include "vsum/pipeline.hpp"

namespace vsum {

/// Dense displacement in pixels per frame.
struct FlowField {
  Plane u;
  Plane v;
};

/// Classical Horn-Schunck: 2x2x2 forward-difference derivatives, 4-neighbor
/// flow averages with edge replication, zero initial flow, fixed number of
/// Jacobi iterations. Intensities are used as given, so alpha is relative to
/// the sample scale of f1/f2.
FlowField horn_schunck(const Plane& f1, const Plane& f2, double alpha, int iters, int threads = 1);

/// BT.601 luma for RGB, the plane itself for single-channel images.
Plane luma(const Image& img);

/// Plain temporal average, exposed as the averaging baseline.
Image average_summary(const FrameStream& stream);

struct FlowSummary {
  Image summary;
  std::size_t flow_invocations = 0;
  /// Sum of all flow components, so the flow work cannot be optimized away.
  double checksum = 0.0;
};

/// Horn-Schunck on the luma (scaled to [0, 255]) of every consecutive frame
/// pair, plus the plain average as the returned image. Needs >= 2 frames.
FlowSummary flow_summary(const FrameStream& stream, double alpha, int iters, int threads = 1);

enum class BenchMethod { kSaliencyFusion, kAverage, kOpticalFlow };

const char* method_name(BenchMethod m) noexcept;
/// Throws Error(kParameter) for unknown names.
BenchMethod method_from_name(const std::string& name);

struct BenchOptions {
  std::vector<BenchMethod> methods{BenchMethod::kSaliencyFusion, BenchMethod::kAverage,
                                   BenchMethod::kOpticalFlow};
  int repeats = 1;
  double flow_alpha = 1.0;
  int flow_iters = 100;
  int threads = 1;
  PipelineConfig pipeline;
};

struct TimingReport {
  std::string method;
  std::size_t frames = 0;
  int width = 0;
  int height = 0;
  double wall_seconds = 0.0;
  double per_frame_ms = 0.0;
  int threads = 1;
  int repeats = 1;
  std::string machine;
};

/// Minimum of `repeats` timed runs per method after one untimed warm-up.
/// Frames are decoded up front, so timing covers only the algorithm.
std::vector<TimingReport> run_benchmark(const FrameStream& stream, const BenchOptions& options);

/// Short description of the host (kernel, architecture, hardware threads).
std::string machine_descriptor();

/// One JSON object, no trailing newline.
std::string to_json_line(const TimingReport& report);

}  // namespace vsum
