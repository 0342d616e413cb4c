#include "wavefuse/app/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <tuple>

#include "wavefuse/app/commands.hpp"
#include "wavefuse/app/scene.hpp"
#include "wavefuse/error.hpp"
#include "wavefuse/log.hpp"

namespace wavefuse::app {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double time_job(const Scene& scene, const JobSpec& job, int reps) {
  std::vector<double> times;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    const MultibandImage fused = fuse_job(scene.pan, scene.ms, job);
    const auto t1 = Clock::now();
    if (fused.band_count() == 0) fail(ErrorCode::JobFailed, "empty bench result");
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return median(std::move(times));
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void validate(const BenchSpec& spec) {
  if (spec.reps < 1) fail(ErrorCode::InvalidArgument, "--reps must be at least 1");
  if (spec.sizes.empty() || spec.methods.empty() || spec.grids.empty()) {
    fail(ErrorCode::InvalidArgument, "bench needs at least one size, method and grid");
  }
  if (spec.workers.empty() && spec.nodes.empty()) {
    fail(ErrorCode::InvalidArgument, "bench needs a worker count or node list");
  }
  for (const auto& s : spec.sizes) {
    if (s.width < 4 || s.height < 4)
      fail(ErrorCode::InvalidArgument, "bench sizes must be at least 4x4");
  }
  for (int w : spec.workers) {
    if (w < 1) fail(ErrorCode::InvalidArgument, "worker counts must be at least 1");
  }
  for (const auto& m : spec.methods) (void)parse_method(m, spec.weight);
  if (spec.bands < 1) fail(ErrorCode::InvalidArgument, "band count must be at least 1");
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  validate(spec);
  BenchReport report;
  for (const Size& size : spec.sizes) {
    const Scene scene = synth_scene(size.width, size.height, spec.bands, spec.seed);
    const double megapixels = static_cast<double>(size.width) * size.height / 1e6;
    for (const std::string& method : spec.methods) {
      double baseline = 0.0;
      auto add_row = [&](const Size& grid, int workers, bool distributed) {
        JobSpec job;
        job.method = method;
        job.weight = spec.weight;
        job.grid_w = grid.width;
        job.grid_h = grid.height;
        job.workers = workers;
        if (distributed) job.nodes = spec.nodes;
        BenchRow row;
        row.method = method;
        row.pan_w = size.width;
        row.pan_h = size.height;
        row.grid_w = grid.width;
        row.grid_h = grid.height;
        row.workers = workers;
        row.distributed = distributed;
        row.wall_seconds = time_job(scene, job, spec.reps);
        row.megapixels_per_second = megapixels / row.wall_seconds;
        if (baseline == 0.0) baseline = row.wall_seconds;
        row.speedup = baseline / row.wall_seconds;
        log::info(method + " " + std::to_string(grid.width) + "x" + std::to_string(grid.height) +
                  " w=" + std::to_string(workers) + " " + fmt("%.4f s", row.wall_seconds));
        report.rows.push_back(row);
      };
      for (const Size& grid : spec.grids) {
        for (int w : spec.workers) add_row(grid, w, false);
      }
      if (!spec.nodes.empty()) {
        for (const Size& grid : spec.grids) {
          add_row(grid, static_cast<int>(spec.nodes.size()), true);
        }
      }
    }
  }
  return report;
}

void print_bench(const BenchReport& report, std::ostream& out) {
  using Config = std::tuple<bool, int, int, int>;  // distributed, grid_w, grid_h, workers
  std::vector<Config> configs;
  std::vector<std::string> methods;
  std::vector<std::pair<int, int>> sizes;
  std::map<std::tuple<Config, std::string, int, int>, double> seconds;
  for (const BenchRow& r : report.rows) {
    const Config c{r.distributed, r.grid_w, r.grid_h, r.workers};
    if (std::find(configs.begin(), configs.end(), c) == configs.end()) configs.push_back(c);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    const std::pair<int, int> s{r.pan_w, r.pan_h};
    if (std::find(sizes.begin(), sizes.end(), s) == sizes.end()) sizes.push_back(s);
    seconds[{c, r.method, r.pan_w, r.pan_h}] = r.wall_seconds;
  }

  for (const Config& c : configs) {
    const auto [distributed, gw, gh, workers] = c;
    out << "# wall time, seconds (median); grid " << gw << "x" << gh << ", "
        << (distributed ? "nodes " : "workers ") << workers << '\n';
    out << "PAN width, px  PAN height, px";
    for (const auto& m : methods)
      out << "  " << std::string(10 - std::min<std::size_t>(10, m.size()), ' ') << m;
    out << '\n';
    for (const auto& [w, h] : sizes) {
      out << fmt("%14.0f", w) << fmt("%16.0f", h);
      for (const auto& m : methods) {
        const auto it = seconds.find({c, m, w, h});
        out << "  " << (it == seconds.end() ? std::string(10, '-') : fmt("%10.4f", it->second));
      }
      out << '\n';
    }
    out << '\n';
  }

  out << "method  pan_w  pan_h  grid  mode     workers  wall_s    MP/s      speedup\n";
  for (const BenchRow& r : report.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s  %5d  %5d  %dx%-2d  %-7s  %7d  %8.4f  %8.2f  %7.2f\n",
                  r.method.c_str(), r.pan_w, r.pan_h, r.grid_w, r.grid_h,
                  r.distributed ? "cluster" : "local", r.workers, r.wall_seconds,
                  r.megapixels_per_second, r.speedup);
    out << line;
  }
}

int cmd_bench(const BenchSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    print_bench(run_bench(spec), out);
    return kOk;
  } catch (const Error& e) {
    err << "wavefuse: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace wavefuse::app
