#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "vsum/bench.hpp"
#include "vsum/codec.hpp"
#include "vsum/ingest.hpp"
#include "vsum/pipeline.hpp"
#include "vsum/vsum.h"

struct vsum_config {
  vsum::PipelineConfig value;
};

struct vsum_image {
  vsum::Image value;
};

struct vsum_stream {
  vsum::FrameStream value;
};

struct vsum_trace {
  vsum::SummaryTrace value;
};

struct vsum_bench_report {
  std::vector<vsum::TimingReport> rows;
};

namespace {

thread_local std::string g_last_error;

vsum_status fail(vsum_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

vsum_status from_code(vsum::ErrorCode code) {
  switch (code) {
    case vsum::ErrorCode::kInputShape: return VSUM_ERR_INPUT_SHAPE;
    case vsum::ErrorCode::kParameter: return VSUM_ERR_PARAMETER;
    case vsum::ErrorCode::kNoFrames: return VSUM_ERR_NO_FRAMES;
    case vsum::ErrorCode::kInconsistentFrames: return VSUM_ERR_INCONSISTENT_FRAMES;
    case vsum::ErrorCode::kFormat: return VSUM_ERR_FORMAT;
    case vsum::ErrorCode::kNoPairs: return VSUM_ERR_NO_PAIRS;
    case vsum::ErrorCode::kIo: return VSUM_ERR_IO;
  }
  return VSUM_ERR_INTERNAL;
}

// Runs fn, translating every exception into a status code.
template <typename Fn>
vsum_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return VSUM_OK;
  } catch (const vsum::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(VSUM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VSUM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VSUM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VSUM_ERR_INTERNAL, "unknown exception");
  }
}

#define VSUM_REQUIRE(ptr)                                                   \
  do {                                                                      \
    if ((ptr) == nullptr) return fail(VSUM_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

// Applies a mutation to a copy, validates, then commits.
template <typename Fn>
vsum_status update_config(vsum_config* cfg, Fn&& fn) noexcept {
  VSUM_REQUIRE(cfg);
  return guarded([&] {
    vsum::PipelineConfig next = cfg->value;
    fn(next);
    next.validate();
    cfg->value = next;
  });
}

const vsum::PipelineConfig& config_or_default(const vsum_config* cfg) {
  static const vsum::PipelineConfig defaults;
  return cfg ? cfg->value : defaults;
}

vsum::Image trace_item(const vsum::SummaryTrace& t, vsum_trace_item item, bool view) {
  switch (item) {
    case VSUM_TRACE_SOURCE1: return t.source1;
    case VSUM_TRACE_SOURCE2: return t.source2;
    case VSUM_TRACE_BASE1: return t.layers1.base;
    case VSUM_TRACE_BASE2: return t.layers2.base;
    case VSUM_TRACE_DETAIL1:
      return view ? vsum::detail_view(t.layers1.detail) : t.layers1.detail;
    case VSUM_TRACE_DETAIL2:
      return view ? vsum::detail_view(t.layers2.detail) : t.layers2.detail;
    case VSUM_TRACE_SALIENCY1:
      return view ? vsum::saliency_view(t.saliency1) : vsum::weight_view(t.saliency1.map);
    case VSUM_TRACE_SALIENCY2:
      return view ? vsum::saliency_view(t.saliency2) : vsum::weight_view(t.saliency2.map);
    case VSUM_TRACE_WEIGHT1: return vsum::weight_view(t.weights.w1);
    case VSUM_TRACE_WEIGHT2: return vsum::weight_view(t.weights.w2);
    case VSUM_TRACE_FUSED: return t.fused;
    case VSUM_TRACE_ITEM_COUNT: break;
  }
  throw vsum::Error(vsum::ErrorCode::kParameter, "unknown trace item");
}

}  // namespace

extern "C" {

const char* vsum_version(void) { return "1.0.0"; }

const char* vsum_status_string(vsum_status status) {
  switch (status) {
    case VSUM_OK: return "ok";
    case VSUM_ERR_INPUT_SHAPE: return "input-shape error";
    case VSUM_ERR_PARAMETER: return "parameter error";
    case VSUM_ERR_NO_FRAMES: return "no-frames error";
    case VSUM_ERR_INCONSISTENT_FRAMES: return "inconsistent-frames error";
    case VSUM_ERR_FORMAT: return "format error";
    case VSUM_ERR_NO_PAIRS: return "no-pairs error";
    case VSUM_ERR_IO: return "io error";
    case VSUM_ERR_NULL_ARGUMENT: return "null argument";
    case VSUM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case VSUM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* vsum_last_error(void) { return g_last_error.c_str(); }

vsum_status vsum_config_create(vsum_config** out) {
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_config{}; });
}

void vsum_config_destroy(vsum_config* cfg) { delete cfg; }

vsum_status vsum_config_set_log_sigma(vsum_config* cfg, double sigma) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.filter.log_sigma = sigma; });
}

vsum_status vsum_config_set_wiener_window(vsum_config* cfg, int window) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.filter.wiener_window = window; });
}

vsum_status vsum_config_set_wiener_noise_variance(vsum_config* cfg, double variance) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) {
    if (variance < 0.0) {
      c.filter.wiener_noise_variance.reset();
    } else {
      c.filter.wiener_noise_variance = variance;
    }
  });
}

vsum_status vsum_config_set_added_noise_sigma(vsum_config* cfg, double sigma) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.filter.added_noise_sigma = sigma; });
}

vsum_status vsum_config_set_noise_seed(vsum_config* cfg, uint64_t seed) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.filter.noise_seed = seed; });
}

vsum_status vsum_config_set_wiener_mode(vsum_config* cfg, vsum_wiener_mode mode) {
  if (mode != VSUM_WIENER_ADAPTIVE && mode != VSUM_WIENER_FREQUENCY) {
    return fail(VSUM_ERR_PARAMETER, "unknown wiener mode");
  }
  return update_config(cfg, [&](vsum::PipelineConfig& c) {
    c.filter.wiener_mode = mode == VSUM_WIENER_FREQUENCY ? vsum::WienerMode::kFrequencyDomain
                                                         : vsum::WienerMode::kSpatialAdaptive;
  });
}

vsum_status vsum_config_set_base_filter(vsum_config* cfg, vsum_base_filter filter) {
  if (filter != VSUM_BASE_WIENER && filter != VSUM_BASE_GAUSSIAN) {
    return fail(VSUM_ERR_PARAMETER, "unknown base filter");
  }
  return update_config(cfg, [&](vsum::PipelineConfig& c) {
    c.base_filter = filter == VSUM_BASE_GAUSSIAN ? vsum::BaseFilter::kGaussian
                                                 : vsum::BaseFilter::kWiener;
  });
}

vsum_status vsum_config_set_epsilon_tie(vsum_config* cfg, double epsilon) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.epsilon_tie = epsilon; });
}

vsum_status vsum_config_set_threads(vsum_config* cfg, int threads) {
  return update_config(cfg, [&](vsum::PipelineConfig& c) { c.filter.threads = threads; });
}

vsum_status vsum_image_from_bytes(const uint8_t* raw, size_t length, int width, int height,
                                  int channels, vsum_image** out) {
  VSUM_REQUIRE(out);
  *out = nullptr;
  if (raw == nullptr && length != 0) return fail(VSUM_ERR_NULL_ARGUMENT, "raw is NULL");
  return guarded([&] {
    *out = new vsum_image{vsum::image_from_bytes({raw, length}, width, height, channels)};
  });
}

vsum_status vsum_image_read(const char* path, vsum_image** out) {
  VSUM_REQUIRE(path);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_image{vsum::read_image(path)}; });
}

void vsum_image_destroy(vsum_image* img) { delete img; }

vsum_status vsum_image_info(const vsum_image* img, int* width, int* height, int* channels) {
  VSUM_REQUIRE(img);
  if (width) *width = img->value.width();
  if (height) *height = img->value.height();
  if (channels) *channels = img->value.channels();
  return VSUM_OK;
}

vsum_status vsum_image_to_bytes(const vsum_image* img, int depth, uint8_t* buffer,
                                size_t capacity, size_t* written) {
  VSUM_REQUIRE(img);
  VSUM_REQUIRE(written);
  if (depth != 8 && depth != 16) return fail(VSUM_ERR_PARAMETER, "depth must be 8 or 16");
  const std::size_t width = depth == 8 ? 1 : 2;
  *written = static_cast<std::size_t>(img->value.width()) * img->value.height() *
             img->value.channels() * width;
  if (buffer == nullptr || capacity < *written) {
    return fail(VSUM_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  return guarded([&] {
    const auto samples =
        vsum::image_to_samples(img->value, depth == 8 ? vsum::BitDepth::k8 : vsum::BitDepth::k16);
    if (depth == 8) {
      for (std::size_t i = 0; i < samples.size(); ++i) buffer[i] = static_cast<uint8_t>(samples[i]);
    } else {
      std::memcpy(buffer, samples.data(), *written);
    }
  });
}

vsum_status vsum_image_copy_plane(const vsum_image* img, int channel, double* buffer,
                                  size_t capacity) {
  VSUM_REQUIRE(img);
  VSUM_REQUIRE(buffer);
  if (channel < 0 || channel >= img->value.channels()) {
    return fail(VSUM_ERR_PARAMETER, "channel out of range");
  }
  const auto samples = img->value.plane(channel).samples();
  if (capacity < samples.size()) return fail(VSUM_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buffer, samples.data(), samples.size() * sizeof(double));
  return VSUM_OK;
}

vsum_status vsum_image_write(const vsum_image* img, const char* path, int depth) {
  VSUM_REQUIRE(img);
  VSUM_REQUIRE(path);
  if (depth != 8 && depth != 16) return fail(VSUM_ERR_PARAMETER, "depth must be 8 or 16");
  return guarded([&] {
    vsum::write_image(path, img->value, depth == 8 ? vsum::BitDepth::k8 : vsum::BitDepth::k16);
  });
}

vsum_status vsum_stream_open(const char* path, vsum_stream_kind kind, vsum_stream** out) {
  VSUM_REQUIRE(path);
  VSUM_REQUIRE(out);
  *out = nullptr;
  vsum::StreamKind k = vsum::StreamKind::kAuto;
  switch (kind) {
    case VSUM_STREAM_AUTO: k = vsum::StreamKind::kAuto; break;
    case VSUM_STREAM_DIRECTORY: k = vsum::StreamKind::kDirectory; break;
    case VSUM_STREAM_Y4M: k = vsum::StreamKind::kY4m; break;
    default: return fail(VSUM_ERR_PARAMETER, "unknown stream kind");
  }
  return guarded([&] { *out = new vsum_stream{vsum::FrameStream::open(path, k)}; });
}

void vsum_stream_destroy(vsum_stream* stream) { delete stream; }

vsum_status vsum_stream_info(const vsum_stream* stream, int* width, int* height, int* channels,
                             uint64_t* frames) {
  VSUM_REQUIRE(stream);
  if (width) *width = stream->value.width();
  if (height) *height = stream->value.height();
  if (channels) *channels = stream->value.channels();
  if (frames) *frames = stream->value.frame_count();
  return VSUM_OK;
}

vsum_status vsum_stream_first_frame(const vsum_stream* stream, vsum_image** out) {
  VSUM_REQUIRE(stream);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_image{vsum::first_frame(stream->value)}; });
}

vsum_status vsum_stream_temporal_average(const vsum_stream* stream, vsum_image** out) {
  VSUM_REQUIRE(stream);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_image{vsum::temporal_average(stream->value)}; });
}

vsum_status vsum_stream_build_sources(const vsum_stream* stream, vsum_image** first,
                                      vsum_image** average) {
  VSUM_REQUIRE(stream);
  VSUM_REQUIRE(first);
  VSUM_REQUIRE(average);
  *first = nullptr;
  *average = nullptr;
  return guarded([&] {
    vsum::SourcePair pair = vsum::build_sources(stream->value);
    auto a = std::make_unique<vsum_image>(vsum_image{std::move(pair.first)});
    auto b = std::make_unique<vsum_image>(vsum_image{std::move(pair.average)});
    *first = a.release();
    *average = b.release();
  });
}

vsum_status vsum_summarize(const vsum_image* a1, const vsum_image* a2, const vsum_config* cfg,
                           vsum_image** out) {
  VSUM_REQUIRE(a1);
  VSUM_REQUIRE(a2);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new vsum_image{vsum::summarize(a1->value, a2->value, config_or_default(cfg))};
  });
}

vsum_status vsum_summarize_traced(const vsum_image* a1, const vsum_image* a2,
                                  const vsum_config* cfg, vsum_trace** out) {
  VSUM_REQUIRE(a1);
  VSUM_REQUIRE(a2);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new vsum_trace{vsum::summarize_traced(a1->value, a2->value, config_or_default(cfg))};
  });
}

void vsum_trace_destroy(vsum_trace* trace) { delete trace; }

vsum_status vsum_trace_get(const vsum_trace* trace, vsum_trace_item item, vsum_image** out) {
  VSUM_REQUIRE(trace);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_image{trace_item(trace->value, item, false)}; });
}

vsum_status vsum_trace_view(const vsum_trace* trace, vsum_trace_item item, vsum_image** out) {
  VSUM_REQUIRE(trace);
  VSUM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new vsum_image{trace_item(trace->value, item, true)}; });
}

const char* vsum_trace_item_name(vsum_trace_item item) {
  static constexpr const char* kNames[VSUM_TRACE_ITEM_COUNT] = {
      "source1", "source2",   "base1",     "base2",   "detail1", "detail2",
      "saliency1", "saliency2", "weight1", "weight2", "fused"};
  if (item < 0 || item >= VSUM_TRACE_ITEM_COUNT) return nullptr;
  return kNames[item];
}

vsum_status vsum_bench_run(const vsum_stream* stream, unsigned methods, int repeats,
                           double flow_alpha, int flow_iters, int threads, const vsum_config* cfg,
                           vsum_bench_report** out) {
  VSUM_REQUIRE(stream);
  VSUM_REQUIRE(out);
  *out = nullptr;
  if (methods == 0 || (methods & ~VSUM_METHOD_ALL) != 0) {
    return fail(VSUM_ERR_PARAMETER, "method mask must be a non-empty subset of VSUM_METHOD_ALL");
  }
  return guarded([&] {
    vsum::BenchOptions opt;
    opt.methods.clear();
    if (methods & VSUM_METHOD_SALIENCY_FUSION) opt.methods.push_back(vsum::BenchMethod::kSaliencyFusion);
    if (methods & VSUM_METHOD_AVERAGE) opt.methods.push_back(vsum::BenchMethod::kAverage);
    if (methods & VSUM_METHOD_OPTICAL_FLOW) opt.methods.push_back(vsum::BenchMethod::kOpticalFlow);
    opt.repeats = repeats;
    opt.flow_alpha = flow_alpha;
    opt.flow_iters = flow_iters;
    opt.threads = threads;
    opt.pipeline = config_or_default(cfg);
    *out = new vsum_bench_report{vsum::run_benchmark(stream->value, opt)};
  });
}

void vsum_bench_report_destroy(vsum_bench_report* report) { delete report; }

size_t vsum_bench_report_count(const vsum_bench_report* report) {
  return report ? report->rows.size() : 0;
}

vsum_status vsum_bench_report_get(const vsum_bench_report* report, size_t index,
                                  vsum_timing* out) {
  VSUM_REQUIRE(report);
  VSUM_REQUIRE(out);
  if (index >= report->rows.size()) return fail(VSUM_ERR_PARAMETER, "report index out of range");
  const auto& r = report->rows[index];
  out->method = r.method.c_str();
  out->frames = r.frames;
  out->width = r.width;
  out->height = r.height;
  out->wall_seconds = r.wall_seconds;
  out->per_frame_ms = r.per_frame_ms;
  out->threads = r.threads;
  out->repeats = r.repeats;
  return VSUM_OK;
}

vsum_status vsum_bench_report_json(const vsum_bench_report* report, size_t index, char* buffer,
                                   size_t capacity, size_t* needed) {
  VSUM_REQUIRE(report);
  VSUM_REQUIRE(needed);
  if (index >= report->rows.size()) return fail(VSUM_ERR_PARAMETER, "report index out of range");
  const std::string line = vsum::to_json_line(report->rows[index]);
  *needed = line.size() + 1;
  if (buffer == nullptr || capacity < *needed) {
    return fail(VSUM_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buffer, line.c_str(), *needed);
  return VSUM_OK;
}

}  // extern "C"
