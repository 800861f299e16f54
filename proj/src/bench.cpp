#include "vsum/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "json.hpp"
#include "parallel.hpp"

namespace vsum {

FlowField horn_schunck(const Plane& f1, const Plane& f2, double alpha, int iters, int threads) {
  require_same_shape(f1, f2, "horn_schunck");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kParameter, "horn_schunck alpha must be > 0");
  }
  if (iters < 1) throw Error(ErrorCode::kParameter, "horn_schunck needs at least one iteration");

  const int w = f1.width();
  const int h = f1.height();
  Plane ex(w, h);
  Plane ey(w, h);
  Plane et(w, h);
  Plane denom(w, h);
  const double alpha2 = alpha * alpha;
  detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        auto a = [&](int dx, int dy) { return f1.clamped(x + dx, y + dy); };
        auto b = [&](int dx, int dy) { return f2.clamped(x + dx, y + dy); };
        ex(x, y) = 0.25 * (a(1, 0) - a(0, 0) + a(1, 1) - a(0, 1) + b(1, 0) - b(0, 0) + b(1, 1) -
                           b(0, 1));
        ey(x, y) = 0.25 * (a(0, 1) - a(0, 0) + a(1, 1) - a(1, 0) + b(0, 1) - b(0, 0) + b(1, 1) -
                           b(1, 0));
        et(x, y) = 0.25 * (b(0, 0) - a(0, 0) + b(1, 0) - a(1, 0) + b(0, 1) - a(0, 1) + b(1, 1) -
                           a(1, 1));
        denom(x, y) = alpha2 + ex(x, y) * ex(x, y) + ey(x, y) * ey(x, y);
      }
    }
  });

  FlowField flow{Plane(w, h), Plane(w, h)};
  Plane next_u(w, h);
  Plane next_v(w, h);
  for (int it = 0; it < iters; ++it) {
    detail::parallel_rows(h, threads, [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < w; ++x) {
          const double ub = 0.25 * (flow.u.clamped(x - 1, y) + flow.u.clamped(x + 1, y) +
                                    flow.u.clamped(x, y - 1) + flow.u.clamped(x, y + 1));
          const double vb = 0.25 * (flow.v.clamped(x - 1, y) + flow.v.clamped(x + 1, y) +
                                    flow.v.clamped(x, y - 1) + flow.v.clamped(x, y + 1));
          const double t = (ex(x, y) * ub + ey(x, y) * vb + et(x, y)) / denom(x, y);
          next_u(x, y) = ub - ex(x, y) * t;
          next_v(x, y) = vb - ey(x, y) * t;
        }
      }
    });
    std::swap(flow.u, next_u);
    std::swap(flow.v, next_v);
  }
  return flow;
}

Plane luma(const Image& img) {
  if (img.channels() == 1) return img.plane(0);
  Plane out(img.width(), img.height());
  auto r = img.plane(0).samples();
  auto g = img.plane(1).samples();
  auto b = img.plane(2).samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return out;
}

Image average_summary(const FrameStream& stream) { return temporal_average(stream); }

FlowSummary flow_summary(const FrameStream& stream, double alpha, int iters, int threads) {
  if (stream.frame_count() < 2) {
    throw Error(ErrorCode::kNoPairs, "optical flow needs at least two frames, got " +
                                         std::to_string(stream.frame_count()));
  }
  auto scaled_luma = [](const Image& img) {
    Plane y = luma(img);
    for (double& v : y.samples()) v *= 255.0;
    return y;
  };

  FlowSummary result{average_summary(stream), 0, 0.0};
  Plane prev = scaled_luma(stream.frame(0));
  for (std::size_t i = 1; i < stream.frame_count(); ++i) {
    Plane cur = scaled_luma(stream.frame(i));
    const FlowField flow = horn_schunck(prev, cur, alpha, iters, threads);
    ++result.flow_invocations;
    for (double v : flow.u.samples()) result.checksum += v;
    for (double v : flow.v.samples()) result.checksum += v;
    prev = std::move(cur);
  }
  return result;
}

const char* method_name(BenchMethod m) noexcept {
  switch (m) {
    case BenchMethod::kSaliencyFusion: return "saliency_fusion";
    case BenchMethod::kAverage: return "average";
    case BenchMethod::kOpticalFlow: return "optical_flow";
  }
  return "unknown";
}

BenchMethod method_from_name(const std::string& name) {
  for (auto m : {BenchMethod::kSaliencyFusion, BenchMethod::kAverage, BenchMethod::kOpticalFlow}) {
    if (name == method_name(m)) return m;
  }
  throw Error(ErrorCode::kParameter, "unknown benchmark method '" + name + "'");
}

std::string machine_descriptor() {
  std::string desc;
  utsname u{};
  if (uname(&u) == 0) desc = std::string(u.sysname) + " " + u.release + " " + u.machine;
  desc += " hw_threads=" + std::to_string(std::thread::hardware_concurrency());
  return desc;
}

namespace {

// Keeps results observable so the optimizer cannot drop timed work.
volatile double g_sink = 0.0;

void run_method(BenchMethod method, const FrameStream& frames, const BenchOptions& opt) {
  switch (method) {
    case BenchMethod::kSaliencyFusion: {
      const SourcePair sources = build_sources(frames);
      const Image fused = summarize(sources.first, sources.average, opt.pipeline);
      g_sink = fused.plane(0).samples()[0];
      break;
    }
    case BenchMethod::kAverage: {
      const Image avg = average_summary(frames);
      g_sink = avg.plane(0).samples()[0];
      break;
    }
    case BenchMethod::kOpticalFlow: {
      const FlowSummary fs = flow_summary(frames, opt.flow_alpha, opt.flow_iters, opt.threads);
      g_sink = fs.checksum;
      break;
    }
  }
}

}  // namespace

std::vector<TimingReport> run_benchmark(const FrameStream& stream, const BenchOptions& options) {
  if (options.repeats < 1) throw Error(ErrorCode::kParameter, "repeats must be >= 1");
  if (options.threads < 1) throw Error(ErrorCode::kParameter, "threads must be >= 1");
  BenchOptions opt = options;
  opt.pipeline.filter.threads = options.threads;
  opt.pipeline.validate();

  const FrameStream frames = stream.preload();
  const std::string machine = machine_descriptor();
  std::vector<TimingReport> reports;
  for (BenchMethod method : opt.methods) {
    run_method(method, frames, opt);  // warm-up
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opt.repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      run_method(method, frames, opt);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      best = std::min(best, elapsed.count());
    }
    TimingReport rep;
    rep.method = method_name(method);
    rep.frames = frames.frame_count();
    rep.width = frames.width();
    rep.height = frames.height();
    rep.wall_seconds = best;
    rep.per_frame_ms = 1000.0 * best / static_cast<double>(rep.frames);
    rep.threads = opt.threads;
    rep.repeats = opt.repeats;
    rep.machine = machine;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string to_json_line(const TimingReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["frames"] = report.frames;
  j["width"] = report.width;
  j["height"] = report.height;
  j["wall_seconds"] = report.wall_seconds;
  j["per_frame_ms"] = report.per_frame_ms;
  j["threads"] = report.threads;
  j["repeats"] = report.repeats;
  j["machine"] = report.machine;
  return j.dump();
}

}  // namespace vsum
