#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vsum_cli {

namespace fs = std::filesystem;

namespace {

void write_image(const vsum_image* img, const std::string& path, int depth) {
  check(vsum_image_write(img, path.c_str(), depth), kExitOutput,
        "cannot write '" + path + "'");
}

unsigned parse_methods(const std::string& list) {
  if (list == "all") return VSUM_METHOD_ALL;
  unsigned mask = 0;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "saliency_fusion" || item == "fusion") {
      mask |= VSUM_METHOD_SALIENCY_FUSION;
    } else if (item == "average") {
      mask |= VSUM_METHOD_AVERAGE;
    } else if (item == "optical_flow" || item == "flow") {
      mask |= VSUM_METHOD_OPTICAL_FLOW;
    } else if (item == "all") {
      mask |= VSUM_METHOD_ALL;
    } else {
      throw CliError(kExitInput, "unknown benchmark method '" + item + "'");
    }
  }
  if (mask == 0) throw CliError(kExitInput, "no benchmark methods selected");
  return mask;
}

}  // namespace

int cmd_summarize(const std::string& input, const std::string& output, const Settings& settings) {
  const ConfigPtr cfg = make_config(settings);
  const StreamPtr stream = open_stream(input);
  const Sources src = build_sources(stream.get(), input);
  vsum_image* fused = nullptr;
  check(vsum_summarize(src.first.get(), src.average.get(), cfg.get(), &fused), kExitInput,
        "fusion failed for '" + input + "'");
  const ImagePtr fused_ptr(fused);
  write_image(fused, output, settings.bit_depth);
  return kExitOk;
}

int cmd_inspect(const std::string& input, const std::string& outdir, const Settings& settings) {
  const ConfigPtr cfg = make_config(settings);
  const StreamPtr stream = open_stream(input);
  const Sources src = build_sources(stream.get(), input);
  vsum_trace* raw = nullptr;
  check(vsum_summarize_traced(src.first.get(), src.average.get(), cfg.get(), &raw), kExitInput,
        "fusion failed for '" + input + "'");
  const TracePtr trace(raw);

  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw CliError(kExitOutput, "cannot create '" + outdir + "': " + ec.message());
  for (int i = 0; i < VSUM_TRACE_ITEM_COUNT; ++i) {
    const auto item = static_cast<vsum_trace_item>(i);
    vsum_image* view = nullptr;
    check(vsum_trace_view(trace.get(), item, &view), kExitInput, "inspect");
    const ImagePtr view_ptr(view);
    const fs::path path = fs::path(outdir) / (std::string(vsum_trace_item_name(item)) + ".png");
    write_image(view, path.string(), settings.bit_depth);
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& args, const Settings& settings) {
  const unsigned methods = parse_methods(args.methods);
  const ConfigPtr cfg = make_config(settings);
  const StreamPtr stream = open_stream(args.input);
  vsum_bench_report* raw = nullptr;
  check(vsum_bench_run(stream.get(), methods, args.repeats, args.alpha, args.iters, args.threads,
                       cfg.get(), &raw),
        kExitInput, "benchmark failed for '" + args.input + "'");
  const ReportPtr report(raw);

  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out, std::ios::trunc);
    if (!file) throw CliError(kExitOutput, "cannot write '" + args.out + "'");
  }
  std::ostream& out = args.out.empty() ? std::cout : file;
  for (std::size_t i = 0; i < vsum_bench_report_count(report.get()); ++i) {
    std::size_t needed = 0;
    vsum_bench_report_json(report.get(), i, nullptr, 0, &needed);
    std::string line(needed, '\0');
    check(vsum_bench_report_json(report.get(), i, line.data(), line.size(), &needed), kExitOutput,
          "bench report");
    line.resize(needed - 1);
    out << line << '\n';
  }
  out.flush();
  if (!out) throw CliError(kExitOutput, "cannot write benchmark report");
  return kExitOk;
}

}  // namespace vsum_cli
