#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include "wavefuse/app/bench.hpp"
#include "wavefuse/app/commands.hpp"
#include "wavefuse/log.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

wavefuse::Size parse_dims(const std::string& text, const char* what) {
  static const std::regex re(R"((\d+)[xX](\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw CLI::ValidationError(what, "expected WxH, got '" + text + "'");
  }
  return {std::stoi(m[1]), std::stoi(m[2])};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace wavefuse;
  log::init_from_env();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"wavefuse: wavelet pan-sharpening on a local pool or a TCP cluster"};
  app.require_subcommand(1);

  app::JobSpec job;
  std::string job_grid = "1x1";
  std::string pan, out;
  std::vector<std::string> ms;
  auto* fuse = app.add_subcommand("fuse", "fuse a PAN image with MS bands");
  fuse->add_option("--pan", pan, "panchromatic PGM")->required();
  fuse->add_option("--ms", ms, "MS file: one PPM, one PGM, or several PGMs (repeatable)")
      ->required();
  fuse->add_option("--method", job.method, "wa | ihs | hdwt | ddwt")
      ->check(CLI::IsMember({"wa", "ihs", "hdwt", "ddwt"}));
  fuse->add_option("--weight", job.weight, "PAN weight for wa")->check(CLI::Range(0.0f, 1.0f));
  fuse->add_option("--grid", job_grid, "tile grid WxH");
  auto* workers_opt = fuse->add_option("--workers", job.workers, "local worker threads")
                          ->check(CLI::PositiveNumber);
  auto* nodes_opt =
      fuse->add_option("--nodes", job.nodes, "worker endpoints host:port,...")->delimiter(',');
  workers_opt->excludes(nodes_opt);
  fuse->add_flag("--exact-transfer", job.exact_transfer, "float32 results from workers");
  fuse->add_option("--out", out, "output path")->required();

  app::MetricsSpec metrics;
  std::vector<std::string> fused_paths, metric_ms;
  std::string metric_pan, metric_out;
  auto* met = app.add_subcommand("metrics", "ERGAS, Q per band, D_lambda, D_s and QNR");
  met->add_option("fused", fused_paths, "fused image file(s)")->required();
  met->add_option("--ms", metric_ms, "original MS file(s) (repeatable)")->required();
  met->add_option("--pan", metric_pan, "original PAN")->required();
  met->add_option("--ratio", metrics.ratio, "PAN/MS resolution ratio (checked)")
      ->check(CLI::PositiveNumber);
  met->add_option("--out", metric_out, "also write a JSON record here");

  app::BenchSpec bench;
  std::vector<std::string> bench_sizes, bench_grids;
  std::vector<std::string> bench_methods;
  auto* ben = app.add_subcommand("bench", "time fusion on synthetic scenes");
  ben->add_option("--size", bench_sizes, "PAN size WxH (repeatable, default 4070x3736)")
      ->delimiter(',');
  ben->add_option("--method", bench_methods, "methods to time (repeatable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"wa", "ihs", "hdwt", "ddwt"}));
  ben->add_option("--grid", bench_grids, "tile grids WxH (repeatable)")->delimiter(',');
  ben->add_option("--workers", bench.workers, "worker counts, e.g. 1,4")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  ben->add_option("--nodes", bench.nodes, "also time on these endpoints")->delimiter(',');
  ben->add_option("--reps", bench.reps, "repetitions per configuration")
      ->check(CLI::PositiveNumber);
  ben->add_option("--seed", bench.seed, "scene seed");
  ben->add_option("--bands", bench.bands, "MS band count")->check(CLI::PositiveNumber);

  std::string listen;
  auto* wrk = app.add_subcommand("worker", "serve fusion tasks until SHUTDOWN");
  wrk->add_option("--listen", listen, "host:port to bind (port 0 picks one)")->required();

  try {
    app.parse(argc, argv);
    if (fuse->parsed()) {
      const Size g = parse_dims(job_grid, "--grid");
      job.grid_w = g.width;
      job.grid_h = g.height;
      job.pan = pan;
      job.out = out;
      for (const auto& p : ms) job.ms.emplace_back(p);
      job.cancel = &g_interrupted;
    }
    if (met->parsed()) {
      for (const auto& p : fused_paths) metrics.fused.emplace_back(p);
      for (const auto& p : metric_ms) metrics.ms.emplace_back(p);
      metrics.pan = metric_pan;
      metrics.out = metric_out;
    }
    if (ben->parsed()) {
      if (!bench_sizes.empty()) {
        bench.sizes.clear();
        for (const auto& s : bench_sizes) bench.sizes.push_back(parse_dims(s, "--size"));
      }
      if (!bench_grids.empty()) {
        bench.grids.clear();
        for (const auto& s : bench_grids) bench.grids.push_back(parse_dims(s, "--grid"));
      }
      if (!bench_methods.empty()) bench.methods = bench_methods;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? app::kOk : app::kUsage;
  }

  if (fuse->parsed()) return app::cmd_fuse(job, std::cout, std::cerr);
  if (met->parsed()) return app::cmd_metrics(metrics, std::cout, std::cerr);
  if (ben->parsed()) return app::cmd_bench(bench, std::cout, std::cerr);
  return app::cmd_worker(listen, &g_interrupted, std::cout, std::cerr);
}
