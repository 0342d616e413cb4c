#include <doctest.h>

#include <array>
#include <random>
#include <thread>

#include "helpers.hpp"
#include "net.hpp"
#include "wavefuse/cluster.hpp"
#include "wavefuse/error.hpp"
#include "wavefuse/tiling.hpp"
#include "wavefuse/wire.hpp"

using namespace wavefuse;
using namespace std::chrono_literals;

namespace {

// A worker serving on an ephemeral loopback port from a background thread.
class LoopbackWorker {
 public:
  explicit LoopbackWorker(cluster::WorkerOptions options = {})
      : worker_("127.0.0.1:0", options), thread_([this] { worker_.serve(); }) {}
  ~LoopbackWorker() {
    worker_.request_stop();
    thread_.join();
  }
  std::string endpoint() const { return worker_.endpoint(); }
  int tasks_completed() const { return worker_.tasks_completed(); }
  void join() { thread_.join(); }
  bool joinable() const { return thread_.joinable(); }

 private:
  cluster::Worker worker_;
  std::thread thread_;
};

struct Scene {
  Plane pan;
  MultibandImage ms;
};

Scene random_scene(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  return {testing::random_plane8(w, h, rng), testing::random_bands(w / 2, h / 2, 3, rng)};
}

wire::Message read_frame(net::Socket& sock) {
  std::array<std::uint8_t, wire::kHeaderSize> head{};
  REQUIRE(sock.recv_exact(head, {}));
  const auto h = wire::decode_header(head);
  std::vector<std::uint8_t> payload(h.payload_len);
  if (!payload.empty()) REQUIRE(sock.recv_exact(payload, {}));
  return {h.type, payload};
}

void write_frame(net::Socket& sock, const wire::Message& m) {
  sock.send_all(wire::encode_message(m));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

const FusionMethod kMethods[] = {WeightedAverage{0.5f}, Ihs{}, DwtReplace{WaveletKind::Haar},
                                 DwtReplace{WaveletKind::Daubechies4}};

}  // namespace

TEST_CASE("two loopback workers reproduce local 8-bit tiling byte for byte") {
  const Scene s = random_scene(64, 64, 1);
  const auto grid = tiling::plan_grid(64, 64, 2, 2);
  LoopbackWorker a, b;
  for (const auto& m : kMethods) {
    CAPTURE(method_name(m));
    const MultibandImage local =
        tiling::fuse_tiled(s.pan, s.ms, m, grid, 2, tiling::Transfer::Quantized8);
    cluster::JobStats stats;
    const MultibandImage two =
        cluster::run_master(s.pan, s.ms, m, grid, {a.endpoint(), b.endpoint()}, {}, &stats);
    const MultibandImage one = cluster::run_master(s.pan, s.ms, m, grid, {a.endpoint()});
    CHECK(two == local);
    CHECK(one == local);
    CHECK(stats.tasks_sent == 4);
    CHECK(stats.results_merged == 4);
    CHECK(stats.workers_lost == 0);
  }
  CHECK(a.tasks_completed() > 0);
  CHECK(b.tasks_completed() > 0);
}

TEST_CASE("exact transfer returns float results") {
  const Scene s = random_scene(32, 32, 2);
  const auto grid = tiling::plan_grid(32, 32, 2, 2);
  LoopbackWorker a;
  cluster::MasterOptions opts;
  opts.exact_transfer = true;
  const FusionMethod m = DwtReplace{WaveletKind::Daubechies4};
  // Integer inputs at the working size survive quantization untouched.
  CHECK(cluster::run_master(s.pan, s.ms, m, grid, {a.endpoint()}, opts) ==
        tiling::fuse_tiled(s.pan, s.ms, m, grid, 1));
}

TEST_CASE("a crashed worker's tiles are reassigned") {
  const Scene s = random_scene(64, 64, 3);
  const auto grid = tiling::plan_grid(64, 64, 2, 2);
  const FusionMethod m = DwtReplace{WaveletKind::Haar};
  const MultibandImage expect =
      tiling::fuse_tiled(s.pan, s.ms, m, grid, 1, tiling::Transfer::Quantized8);

  cluster::WorkerOptions crashy;
  crashy.crash_after_tasks = 1;
  LoopbackWorker a(crashy), b;
  cluster::JobStats stats;
  const MultibandImage got =
      cluster::run_master(s.pan, s.ms, m, grid, {a.endpoint(), b.endpoint()}, {}, &stats);
  CHECK(got == expect);
  CHECK(stats.workers_lost == 1);
  CHECK(stats.reassigned >= 1);
  CHECK(stats.results_merged == 4);
}

TEST_CASE("a stalled worker times out and its tiles move") {
  const Scene s = random_scene(32, 32, 4);
  const auto grid = tiling::plan_grid(32, 32, 2, 2);
  const FusionMethod m = Ihs{};
  const MultibandImage expect =
      tiling::fuse_tiled(s.pan, s.ms, m, grid, 1, tiling::Transfer::Quantized8);

  cluster::WorkerOptions stall;
  stall.stall_after_tasks = 0;
  LoopbackWorker a(stall), b;
  cluster::MasterOptions opts;
  opts.task_timeout = 300ms;
  cluster::JobStats stats;
  CHECK(cluster::run_master(s.pan, s.ms, m, grid, {a.endpoint(), b.endpoint()}, opts, &stats) ==
        expect);
  CHECK(stats.workers_lost == 1);
}

TEST_CASE("losing every worker fails the job") {
  const Scene s = random_scene(32, 32, 5);
  cluster::WorkerOptions crashy;
  crashy.crash_after_tasks = 0;
  LoopbackWorker a(crashy);
  CHECK(code_of([&] {
          (void)cluster::run_master(s.pan, s.ms, Ihs{}, tiling::plan_grid(32, 32, 2, 2),
                                    {a.endpoint()});
        }) == ErrorCode::JobFailed);
}

TEST_CASE("tile errors are retried a bounded number of times") {
  // IHS on a single band fails on every worker, every time.
  std::mt19937 rng(6);
  const Plane pan = testing::random_plane8(16, 16, rng);
  const MultibandImage ms({testing::random_plane8(8, 8, rng)});
  LoopbackWorker a;
  cluster::JobStats stats;
  CHECK(code_of([&] {
          (void)cluster::run_master(pan, ms, Ihs{}, tiling::plan_grid(16, 16, 1, 1), {a.endpoint()},
                                    {}, &stats);
        }) == ErrorCode::JobFailed);
  CHECK(stats.tasks_sent == 3);
}

TEST_CASE("unreachable workers") {
  const Scene s = random_scene(16, 16, 7);
  const auto grid = tiling::plan_grid(16, 16, 1, 1);
  cluster::MasterOptions opts;
  opts.connect_timeout = 500ms;
  CHECK(code_of([&] {
          (void)cluster::run_master(s.pan, s.ms, Ihs{}, grid, {"127.0.0.1:1"}, opts);
        }) == ErrorCode::NoWorkers);
  CHECK(code_of([&] { (void)cluster::run_master(s.pan, s.ms, Ihs{}, grid, {}); }) ==
        ErrorCode::NoWorkers);

  // One dead endpoint in the list is skipped.
  LoopbackWorker a;
  CHECK_NOTHROW(
      (void)cluster::run_master(s.pan, s.ms, Ihs{}, grid, {"127.0.0.1:1", a.endpoint()}, opts));
}

TEST_CASE("worker protocol: hello, errors and shutdown") {
  cluster::Worker worker("127.0.0.1:0");
  std::thread serve([&] { worker.serve(); });
  auto sock = net::connect_to(net::parse_endpoint(worker.endpoint()), 2000ms);

  write_frame(sock, {wire::MsgType::Hello, {9, 8}});
  CHECK(read_frame(sock) == wire::Message{wire::MsgType::Hello, {9, 8}});

  write_frame(sock, {wire::MsgType::Task, {1, 2, 3}});
  wire::Message e = read_frame(sock);
  CHECK(e.type == wire::MsgType::Error);
  CHECK(wire::error_reason(e) == "MalformedPayload");

  // An IHS task with one band is well-formed but cannot be fused.
  wire::TaskPayload t;
  t.method.method = 1;
  t.pan_w = t.pan_h = 4;
  t.pan.assign(16, 1);
  t.ms.assign(1, std::vector<std::uint8_t>(16, 1));
  write_frame(sock, {wire::MsgType::Task, wire::encode_task(t)});
  e = read_frame(sock);
  CHECK(wire::error_reason(e) == "BandCountMismatch");

  // Still serving after errors.
  t.method.method = 2;
  t.ms.assign(1, std::vector<std::uint8_t>(4, 50));
  t.pan.assign(16, 100);
  write_frame(sock, {wire::MsgType::Task, wire::encode_task(t)});
  const wire::Message r = read_frame(sock);
  REQUIRE(r.type == wire::MsgType::Result);
  const auto result = wire::decode_result(r.payload, 4, 4, false);
  for (float v : result.bands.band(0).samples()) CHECK(v == 50.0f);

  write_frame(sock, {wire::MsgType::Shutdown, {}});
  serve.join();
  CHECK(worker.tasks_completed() == 1);
}

TEST_CASE("a bad frame header closes only that connection") {
  LoopbackWorker w;
  {
    auto sock = net::connect_to(net::parse_endpoint(w.endpoint()), 2000ms);
    const std::vector<std::uint8_t> junk{'N', 'O', 'P', 'E', 1, 0, 1, 0, 0, 0, 0, 0};
    sock.send_all(junk);
    CHECK(wire::error_reason(read_frame(sock)) == "BadMagic");
  }
  const Scene s = random_scene(16, 16, 8);
  CHECK_NOTHROW((void)cluster::run_master(s.pan, s.ms, Ihs{}, tiling::plan_grid(16, 16, 1, 1),
                                          {w.endpoint()}));
}

TEST_CASE("one worker serves consecutive masters") {
  const Scene s = random_scene(32, 32, 9);
  const auto grid = tiling::plan_grid(32, 32, 2, 2);
  LoopbackWorker w;
  const auto first = cluster::run_master(s.pan, s.ms, DwtReplace{}, grid, {w.endpoint()});
  const auto second = cluster::run_master(s.pan, s.ms, DwtReplace{}, grid, {w.endpoint()});
  CHECK(first == second);
  CHECK(w.tasks_completed() == 8);
}

TEST_CASE("interrupting a worker answers its master with an error") {
  std::atomic<bool> interrupt{false};
  cluster::WorkerOptions opts;
  opts.interrupt = &interrupt;
  cluster::Worker worker("127.0.0.1:0", opts);
  std::thread serve([&] { worker.serve(); });
  auto sock = net::connect_to(net::parse_endpoint(worker.endpoint()), 2000ms);
  write_frame(sock, {wire::MsgType::Hello, {}});
  CHECK(read_frame(sock).type == wire::MsgType::Hello);
  interrupt = true;
  const wire::Message e = read_frame(sock);
  CHECK(e.type == wire::MsgType::Error);
  CHECK(wire::error_reason(e) == "Interrupted");
  serve.join();
}

TEST_CASE("shutdown can be requested by a master") {
  LoopbackWorker w;
  const Scene s = random_scene(16, 16, 10);
  cluster::MasterOptions opts;
  opts.shutdown_workers = true;
  (void)cluster::run_master(s.pan, s.ms, Ihs{}, tiling::plan_grid(16, 16, 1, 1), {w.endpoint()},
                            opts);
  // serve() returns on its own; the destructor's stop request is then a no-op.
}

TEST_CASE("a cancelled job stops promptly") {
  const Scene s = random_scene(16, 16, 11);
  cluster::WorkerOptions stall;
  stall.stall_after_tasks = 0;
  LoopbackWorker w(stall);
  std::atomic<bool> cancel{true};
  cluster::MasterOptions opts;
  opts.cancel = &cancel;
  CHECK(code_of([&] {
          (void)cluster::run_master(s.pan, s.ms, Ihs{}, tiling::plan_grid(16, 16, 1, 1),
                                    {w.endpoint()}, opts);
        }) == ErrorCode::Interrupted);
}
