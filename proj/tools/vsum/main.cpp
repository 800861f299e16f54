#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace vsum_cli;

int main(int argc, char** argv) {
  CLI::App app{"vsum: summarize a video into one fused still image"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vsum_version()));

  std::string input, output, outdir, manifest, report;
  int jobs = 1;

  auto* summarize = app.add_subcommand("summarize", "Fuse first frame and temporal average into one image");
  summarize->add_option("input", input, "Frame directory or .y4m file")->required();
  summarize->add_option("output", output, "Output image (.png, .ppm, .pgm)")->required();
  SettingsFlags summarize_flags;
  summarize_flags.attach(*summarize);

  auto* batch = app.add_subcommand("batch", "Process a JSON-lines manifest");
  batch->add_option("manifest", manifest, "Manifest file")->required();
  batch->add_option("--jobs", jobs, "Entries processed concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch->add_option("--report", report, "Report path (default: <manifest>.report.jsonl)");
  SettingsFlags batch_flags;
  batch_flags.attach(*batch);

  auto* inspect = app.add_subcommand("inspect", "Write every intermediate of the fusion");
  inspect->add_option("input", input, "Frame directory or .y4m file")->required();
  inspect->add_option("outdir", outdir, "Output directory")->required();
  SettingsFlags inspect_flags;
  inspect_flags.attach(*inspect);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time fusion against the averaging and optical-flow baselines");
  bench->add_option("input", bench_args.input, "Frame directory or .y4m file")->required();
  bench->add_option("--methods", bench_args.methods,
                    "Comma list of saliency_fusion, average, optical_flow, or all")
      ->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats, "Timed runs per method")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--out", bench_args.out, "JSON-lines output (default: stdout)");
  bench->add_option("--alpha", bench_args.alpha, "Optical-flow smoothness weight")
      ->capture_default_str();
  bench->add_option("--iters", bench_args.iters, "Optical-flow iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  SettingsFlags bench_flags;
  bench_flags.attach(*bench, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*summarize) return cmd_summarize(input, output, summarize_flags.resolve());
    if (*batch) return cmd_batch(manifest, jobs, report, batch_flags.resolve());
    if (*inspect) return cmd_inspect(input, outdir, inspect_flags.resolve());
    if (*bench) {
      const Settings s = bench_flags.resolve();
      bench_args.threads = s.threads;
      return cmd_bench(bench_args, s);
    }
  } catch (const CliError& e) {
    std::cerr << "vsum: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "vsum: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
