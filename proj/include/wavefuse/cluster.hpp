#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavefuse/fusion.hpp"
#include "wavefuse/image.hpp"
#include "wavefuse/tiling.hpp"

namespace wavefuse::cluster {

struct WorkerOptions {
  Exec exec{};
  /// Set from a signal handler to abort: a connected master (idle or with a
  /// task being fused) receives ERROR("Interrupted") and the worker stops
  /// serving.
  const std::atomic<bool>* interrupt = nullptr;

  // Fault injection for tests. After completing this many tasks the worker
  // either drops the connection on the next TASK and stops serving
  // (crash), or keeps the connection but never answers again (stall).
  std::optional<int> crash_after_tasks;
  std::optional<int> stall_after_tasks;
};

/// Listens on an endpoint and serves masters one connection at a time:
/// HELLO is echoed, each TASK is dequantized, fused, quantized and answered
/// with RESULT (or ERROR with the failing error code's name). A master that
/// disconnects is simply replaced by the next one; SHUTDOWN ends serve().
class Worker {
 public:
  explicit Worker(const std::string& listen_endpoint, WorkerOptions options = {});
  ~Worker();
  Worker(const Worker&) = delete;
  Worker& operator=(const Worker&) = delete;

  std::uint16_t port() const noexcept;
  std::string endpoint() const;

  void serve();
  void request_stop() noexcept;
  int tasks_completed() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and serves until SHUTDOWN.
void run_worker(const std::string& listen_endpoint, WorkerOptions options = {});

struct MasterOptions {
  int max_in_flight = 2;  // per worker
  int max_retries = 2;    // per tile
  std::chrono::milliseconds task_timeout{30'000};
  std::chrono::milliseconds connect_timeout{5'000};
  /// Ask workers for float32 results instead of 8-bit ones.
  bool exact_transfer = false;
  /// Send SHUTDOWN to every worker once the job is merged.
  bool shutdown_workers = false;
  const std::atomic<bool>* cancel = nullptr;
};

struct JobStats {
  int tasks_sent = 0;
  int results_merged = 0;
  int duplicates_discarded = 0;
  int reassigned = 0;
  int workers_lost = 0;
};

/// Quantizes tiles to 8 bits, dispatches them round-robin to the workers with
/// a bounded number in flight per worker, reassigns tiles of lost workers and
/// merges results by tile index. The MS image is resampled to the method's
/// working size before splitting, like tiling::fuse_tiled.
MultibandImage run_master(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                          const tiling::TileGrid& grid, const std::vector<std::string>& workers,
                          const MasterOptions& options = {}, JobStats* stats = nullptr);

/// Connects to a worker and sends SHUTDOWN.
void send_shutdown(const std::string& endpoint,
                   std::chrono::milliseconds timeout = std::chrono::milliseconds{5'000});

}  // namespace wavefuse::cluster
