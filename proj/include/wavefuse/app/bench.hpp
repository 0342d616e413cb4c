#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavefuse/fusion.hpp"

namespace wavefuse::app {

struct BenchSpec {
  std::vector<Size> sizes{{4070, 3736}};
  std::vector<std::string> methods{"wa", "ihs", "hdwt", "ddwt"};
  std::vector<Size> grids{{1, 1}, {2, 2}};  // width = grid columns, height = grid rows
  std::vector<int> workers{1, 4};
  std::vector<std::string> nodes;  // adds distributed rows when non-empty
  int reps = 3;
  std::uint32_t seed = 42;
  int bands = 3;
  float weight = 0.5f;
};

struct BenchRow {
  std::string method;
  int pan_w = 0;
  int pan_h = 0;
  int grid_w = 1;
  int grid_h = 1;
  int workers = 1;
  bool distributed = false;
  double wall_seconds = 0.0;  // median over repetitions
  double megapixels_per_second = 0.0;
  double speedup = 1.0;  // baseline time / this time
};

/// Baseline for speedups: the first (grid, workers) configuration of the same
/// size and method, run locally.
struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Times fuse_job on synthesized scenes. Scene synthesis is not timed;
/// padding, tiling, merge and (distributed) transfer are.
BenchReport run_bench(const BenchSpec& spec);

/// Time table (sizes down, methods across) per configuration, then the
/// per-row throughput and speedup listing.
void print_bench(const BenchReport& report, std::ostream& out);

int cmd_bench(const BenchSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace wavefuse::app
