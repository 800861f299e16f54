#pragma once

// Thin RAII layer over the C API for the command-line tool.

#include <memory>
#include <stdexcept>
#include <string>

#include "vsum/vsum.h"

namespace vsum_cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitOutput = 3,
  kExitPartial = 4,
};

/// Failure that maps to a process exit status.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

inline void check(vsum_status status, int exit_code, const std::string& context) {
  if (status != VSUM_OK) {
    throw CliError(exit_code, context + ": " + vsum_status_string(status) + ": " + vsum_last_error());
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Destroy(p); }
};

using ConfigPtr = std::unique_ptr<vsum_config, Deleter<vsum_config, vsum_config_destroy>>;
using ImagePtr = std::unique_ptr<vsum_image, Deleter<vsum_image, vsum_image_destroy>>;
using StreamPtr = std::unique_ptr<vsum_stream, Deleter<vsum_stream, vsum_stream_destroy>>;
using TracePtr = std::unique_ptr<vsum_trace, Deleter<vsum_trace, vsum_trace_destroy>>;
using ReportPtr =
    std::unique_ptr<vsum_bench_report, Deleter<vsum_bench_report, vsum_bench_report_destroy>>;

inline StreamPtr open_stream(const std::string& path) {
  vsum_stream* raw = nullptr;
  check(vsum_stream_open(path.c_str(), VSUM_STREAM_AUTO, &raw), kExitInput,
        "cannot read input '" + path + "'");
  return StreamPtr(raw);
}

struct Sources {
  ImagePtr first;
  ImagePtr average;
};

inline Sources build_sources(const vsum_stream* stream, const std::string& path) {
  vsum_image* first = nullptr;
  vsum_image* average = nullptr;
  check(vsum_stream_build_sources(stream, &first, &average), kExitInput,
        "cannot decode input '" + path + "'");
  return {ImagePtr(first), ImagePtr(average)};
}

}  // namespace vsum_cli
