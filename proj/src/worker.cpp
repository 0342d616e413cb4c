#include <array>

#include "net.hpp"
#include "wavefuse/cluster.hpp"
#include "wavefuse/error.hpp"
#include "wavefuse/log.hpp"
#include "wavefuse/wire.hpp"

namespace wavefuse::cluster {

namespace {

enum class After { NextMaster, Stop };

void send(net::Socket& sock, const wire::Message& m) { sock.send_all(wire::encode_message(m)); }

}  // namespace

struct Worker::Impl {
  Impl(const std::string& endpoint, WorkerOptions opts)
      : listener(net::parse_endpoint(endpoint)),
        host(net::parse_endpoint(endpoint).host),
        options(opts) {}

  net::Listener listener;
  std::string host;
  WorkerOptions options;
  std::atomic<bool> stop{false};
  std::atomic<int> completed{0};

  bool stopped() const noexcept {
    return stop.load() || (options.interrupt != nullptr && options.interrupt->load());
  }

  After handle_task(net::Socket& sock, const wire::Message& m) {
    const int done = completed.load();
    if (options.crash_after_tasks && done >= *options.crash_after_tasks) {
      log::info("worker: simulated crash");
      sock.close();
      stop = true;
      return After::Stop;
    }
    if (options.stall_after_tasks && done >= *options.stall_after_tasks) {
      log::info("worker: simulated stall, task ignored");
      return After::NextMaster;
    }
    const bool exact = m.type == wire::MsgType::TaskExact;
    try {
      const wire::TaskPayload task = wire::decode_task(m.payload);
      const wire::TaskInputs in = wire::task_inputs(task);
      log::debug("worker: tile (" + std::to_string(task.index.row) + "," +
                 std::to_string(task.index.col) + ") " + method_name(in.method));
      MultibandImage fused = fuse(in.pan, in.ms, in.method, options.exec);
      if (stopped()) {
        send(sock, wire::error_message(error_name(ErrorCode::Interrupted)));
        return After::Stop;
      }
      const auto payload = wire::encode_result({task.index, std::move(fused)}, exact);
      ++completed;
      send(sock,
           wire::Message{exact ? wire::MsgType::ResultExact : wire::MsgType::Result, payload});
    } catch (const Error& e) {
      log::info(std::string("worker: task failed: ") + e.what());
      send(sock, wire::error_message(error_name(e.code())));
    }
    return After::NextMaster;
  }

  // Returns Stop when serve() should end.
  After serve_connection(net::Socket& sock) {
    const auto stop_fn = [this] { return stopped(); };
    for (;;) {
      std::array<std::uint8_t, wire::kHeaderSize> head{};
      wire::FrameHeader header{};
      std::vector<std::uint8_t> payload;
      try {
        if (!sock.recv_exact(head, stop_fn)) return After::NextMaster;
        try {
          header = wire::decode_header(head);
        } catch (const Error& e) {
          send(sock, wire::error_message(error_name(e.code())));
          return After::NextMaster;
        }
        payload.resize(header.payload_len);
        if (!payload.empty() && !sock.recv_exact(payload, stop_fn)) return After::NextMaster;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Interrupted) {
          // The master is still connected; tell it before going away.
          try {
            send(sock, wire::error_message(error_name(ErrorCode::Interrupted)));
          } catch (const Error&) {
          }
          return After::Stop;
        }
        log::info(std::string("worker: connection dropped: ") + e.what());
        return After::NextMaster;
      }

      const wire::Message m{header.type, std::move(payload)};
      switch (m.type) {
        case wire::MsgType::Hello:
          send(sock, m);
          break;
        case wire::MsgType::Shutdown:
          log::info("worker: shutdown");
          return After::Stop;
        case wire::MsgType::Task:
        case wire::MsgType::TaskExact:
          if (handle_task(sock, m) == After::Stop) return After::Stop;
          break;
        default:
          send(sock, wire::error_message(error_name(ErrorCode::MalformedPayload)));
          return After::NextMaster;
      }
    }
  }
};

Worker::Worker(const std::string& listen_endpoint, WorkerOptions options)
    : impl_(std::make_unique<Impl>(listen_endpoint, options)) {}

Worker::~Worker() = default;

std::uint16_t Worker::port() const noexcept { return impl_->listener.port(); }

std::string Worker::endpoint() const {
  const std::string host =
      impl_->host == "0.0.0.0" || impl_->host == "*" ? "127.0.0.1" : impl_->host;
  return host + ":" + std::to_string(port());
}

void Worker::request_stop() noexcept { impl_->stop = true; }

int Worker::tasks_completed() const noexcept { return impl_->completed.load(); }

void Worker::serve() {
  while (!impl_->stopped()) {
    auto conn = impl_->listener.accept_for(std::chrono::milliseconds{100});
    if (!conn) continue;
    log::info("worker: master connected");
    try {
      if (impl_->serve_connection(*conn) == After::Stop) return;
    } catch (const Error& e) {
      // A failed send means the master went away; wait for the next one.
      log::info(std::string("worker: ") + e.what());
    }
  }
}

void run_worker(const std::string& listen_endpoint, WorkerOptions options) {
  Worker worker(listen_endpoint, options);
  worker.serve();
}

}  // namespace wavefuse::cluster
