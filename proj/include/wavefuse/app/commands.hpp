#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavefuse/error.hpp"
#include "wavefuse/image.hpp"
#include "wavefuse/metrics.hpp"

namespace wavefuse::app {

/// Process exit codes shared by every command.
enum Exit : int { kOk = 0, kUsage = 1, kIoError = 2, kComputeError = 3 };

int exit_code_for(ErrorCode code) noexcept;

struct JobSpec {
  std::filesystem::path pan;
  std::vector<std::filesystem::path> ms;  // one gray, one color, or N gray files
  std::string method = "hdwt";
  float weight = 0.5f;
  int grid_w = 1;
  int grid_h = 1;
  int workers = 1;                 // local thread pool size
  std::vector<std::string> nodes;  // host:port; non-empty selects distributed mode
  bool exact_transfer = false;
  std::filesystem::path out;
  const std::atomic<bool>* cancel = nullptr;
};

/// One gray file = 1 band, one color file = 3 bands, several files = one gray
/// band each.
MultibandImage load_bands(const std::vector<std::filesystem::path>& paths);

/// Three bands go to one PPM at `out`; one band to one PGM at `out`; any
/// other count to `<stem>_b<k><ext>` PGMs. Returns the files written.
std::vector<std::filesystem::path> write_bands(const std::filesystem::path& out,
                                               const MultibandImage& image);

/// Pads for the grid, fuses locally or on the cluster, crops back to the
/// PAN size. The result is still float (not quantized).
MultibandImage fuse_job(const Plane& pan, const MultibandImage& ms, const JobSpec& spec);

int cmd_fuse(const JobSpec& spec, std::ostream& out, std::ostream& err);

struct MetricsSpec {
  std::vector<std::filesystem::path> fused;
  std::vector<std::filesystem::path> ms;
  std::filesystem::path pan;
  int ratio = 0;              // 0: infer from dimensions
  std::filesystem::path out;  // optional JSON record
};

/// key=value lines, six decimals.
std::string format_report(const metrics::QualityReport& report);
std::string report_json(const metrics::QualityReport& report, int ratio);

int cmd_metrics(const MetricsSpec& spec, std::ostream& out, std::ostream& err);

/// Prints `listening <host:port>` once bound, then serves until SHUTDOWN.
int cmd_worker(const std::string& listen, const std::atomic<bool>* interrupt, std::ostream& out,
               std::ostream& err);

}  // namespace wavefuse::app
