#include <poll.h>

#include <algorithm>
#include <deque>
#include <optional>

#include "net.hpp"
#include "wavefuse/cluster.hpp"
#include "wavefuse/error.hpp"
#include "wavefuse/log.hpp"
#include "wavefuse/wire.hpp"

namespace wavefuse::cluster {

namespace {

using Clock = std::chrono::steady_clock;

struct Connection {
  std::string endpoint;
  net::Socket sock;
  bool alive = true;
  bool ready = false;  // HELLO answered
  std::vector<std::uint8_t> inbox;
  std::deque<std::vector<std::uint8_t>> outbox;
  std::size_t out_offset = 0;
  std::deque<int> in_flight;  // tile ids, in send order
  Clock::time_point last_progress = Clock::now();
};

// Single owner of all job bookkeeping. Every tile id is in exactly one of
// pending, some connection's in_flight, or done.
class Coordinator {
 public:
  Coordinator(std::vector<tiling::Tile> tiles, const FusionMethod& method,
              const tiling::TileGrid& grid, const MasterOptions& options, JobStats& stats)
      : tiles_(std::move(tiles)),
        method_(method),
        grid_(grid),
        options_(options),
        stats_(stats),
        retries_(tiles_.size(), 0),
        results_(tiles_.size()) {
    for (int i = 0; i < static_cast<int>(tiles_.size()); ++i) pending_.push_back(i);
  }

  void connect(const std::vector<std::string>& endpoints) {
    for (const auto& ep : endpoints) {
      try {
        Connection c;
        c.endpoint = ep;
        c.sock = net::connect_to(net::parse_endpoint(ep), options_.connect_timeout);
        c.sock.set_nonblocking(true);
        c.outbox.push_back(wire::encode_message({wire::MsgType::Hello, {}}));
        c.last_progress = Clock::now();
        conns_.push_back(std::move(c));
        log::info("master: connected to " + ep);
      } catch (const Error& e) {
        log::warn("master: skipping worker " + ep + ": " + e.what());
      }
    }
    if (conns_.empty()) fail(ErrorCode::NoWorkers, "no worker could be reached");
  }

  std::vector<tiling::FusedTile> run() {
    while (done_ < tiles_.size()) {
      if (options_.cancel != nullptr && options_.cancel->load()) {
        fail(ErrorCode::Interrupted, "job cancelled");
      }
      dispatch();
      if (std::none_of(conns_.begin(), conns_.end(), [](const Connection& c) { return c.alive; })) {
        fail(ErrorCode::JobFailed, "all workers lost with " +
                                       std::to_string(tiles_.size() - done_) + " tiles unfinished");
      }
      poll_once();
      check_timeouts();
    }
    std::vector<tiling::FusedTile> fused;
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
      fused.push_back({tiles_[i].index, std::move(*results_[i])});
    }
    return fused;
  }

  void finish() {
    for (auto& c : conns_) {
      if (!c.alive) continue;
      try {
        c.sock.set_nonblocking(false);
        if (options_.shutdown_workers) {
          c.sock.send_all(wire::encode_message({wire::MsgType::Shutdown, {}}));
        }
      } catch (const Error&) {
      }
      c.sock.close();
    }
  }

 private:
  void dispatch() {
    const std::size_t n = conns_.size();
    while (!pending_.empty()) {
      std::optional<std::size_t> pick;
      for (std::size_t step = 0; step < n; ++step) {
        const std::size_t c = (next_conn_ + step) % n;
        const auto& conn = conns_[c];
        if (conn.alive && conn.ready &&
            static_cast<int>(conn.in_flight.size()) < options_.max_in_flight) {
          pick = c;
          break;
        }
      }
      if (!pick) return;
      next_conn_ = (*pick + 1) % n;
      const int tile = pending_.front();
      pending_.pop_front();
      send_task(conns_[*pick], tile);
    }
  }

  void send_task(Connection& conn, int tile) {
    const auto& t = tiles_[tile];
    const auto task = wire::make_task(t.index, method_, t.pan, t.ms);
    const auto type = options_.exact_transfer ? wire::MsgType::TaskExact : wire::MsgType::Task;
    conn.outbox.push_back(wire::encode_message({type, wire::encode_task(task)}));
    if (conn.in_flight.empty()) conn.last_progress = Clock::now();
    conn.in_flight.push_back(tile);
    ++stats_.tasks_sent;
  }

  void poll_once() {
    std::vector<pollfd> fds;
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < conns_.size(); ++i) {
      if (!conns_[i].alive) continue;
      short events = POLLIN;
      if (!conns_[i].outbox.empty()) events |= POLLOUT;
      fds.push_back({conns_[i].sock.fd(), events, 0});
      owners.push_back(i);
    }
    if (::poll(fds.data(), fds.size(), 50) <= 0) return;
    for (std::size_t k = 0; k < fds.size(); ++k) {
      Connection& conn = conns_[owners[k]];
      try {
        if (fds[k].revents & POLLOUT) flush(conn);
        if (fds[k].revents & (POLLIN | POLLHUP | POLLERR)) receive(conn);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::JobFailed) throw;
        drop(conn, e.what());
      }
    }
  }

  void flush(Connection& conn) {
    while (!conn.outbox.empty()) {
      const auto& frame = conn.outbox.front();
      const auto sent = conn.sock.send_some(std::span(frame).subspan(conn.out_offset));
      if (sent == 0) return;
      conn.out_offset += sent;
      if (conn.out_offset == frame.size()) {
        conn.outbox.pop_front();
        conn.out_offset = 0;
      }
    }
  }

  void receive(Connection& conn) {
    std::array<std::uint8_t, 64 * 1024> buf{};
    for (;;) {
      const auto n = conn.sock.recv_some(buf);
      if (!n) break;
      if (*n == 0) {
        drop(conn, "connection closed by worker");
        return;
      }
      conn.inbox.insert(conn.inbox.end(), buf.begin(),
                        buf.begin() + static_cast<std::ptrdiff_t>(*n));
    }
    while (conn.alive) {
      auto frame = wire::extract_frame(conn.inbox);
      if (!frame) break;
      handle(conn, *frame);
    }
  }

  void handle(Connection& conn, const wire::Message& m) {
    conn.last_progress = Clock::now();
    switch (m.type) {
      case wire::MsgType::Hello:
        conn.ready = true;
        return;
      case wire::MsgType::Result:
      case wire::MsgType::ResultExact: {
        const bool exact = m.type == wire::MsgType::ResultExact;
        auto result = wire::decode_result(m.payload, grid_.pan_tile_w, grid_.pan_tile_h, exact);
        const int tile = tile_id(result.index);
        const auto it = std::find(conn.in_flight.begin(), conn.in_flight.end(), tile);
        if (tile < 0 || it == conn.in_flight.end() || results_[tile]) {
          ++stats_.duplicates_discarded;
          log::debug("master: discarded stray result");
          return;
        }
        conn.in_flight.erase(it);
        results_[tile] = std::move(result.bands);
        ++done_;
        ++stats_.results_merged;
        return;
      }
      case wire::MsgType::Error: {
        const std::string reason = wire::error_reason(m);
        if (conn.in_flight.empty()) {
          drop(conn, "ERROR frame with nothing in flight: " + reason);
          return;
        }
        // Workers answer in order, so an ERROR belongs to the oldest task.
        const int tile = conn.in_flight.front();
        conn.in_flight.pop_front();
        log::warn("master: " + conn.endpoint + " failed tile " + std::to_string(tile) + ": " +
                  reason);
        retry(tile, reason);
        return;
      }
      default:
        drop(conn, "unexpected message type from worker");
    }
  }

  int tile_id(tiling::TileIndex index) const noexcept {
    if (index.row < 0 || index.row >= grid_.grid_h || index.col < 0 || index.col >= grid_.grid_w) {
      return -1;
    }
    return index.row * grid_.grid_w + index.col;
  }

  void retry(int tile, const std::string& reason) {
    if (++retries_[tile] > options_.max_retries) {
      fail(ErrorCode::JobFailed, "tile " + std::to_string(tile) + " failed " +
                                     std::to_string(retries_[tile]) + " times, last: " + reason);
    }
    ++stats_.reassigned;
    pending_.push_back(tile);
  }

  void drop(Connection& conn, const std::string& why) {
    if (!conn.alive) return;
    log::warn("master: dropping worker " + conn.endpoint + ": " + why);
    conn.alive = false;
    conn.sock.close();
    ++stats_.workers_lost;
    auto in_flight = std::move(conn.in_flight);
    conn.in_flight.clear();
    for (int tile : in_flight) retry(tile, why);
  }

  void check_timeouts() {
    const auto now = Clock::now();
    for (auto& conn : conns_) {
      const bool waiting = !conn.ready || !conn.in_flight.empty();
      if (conn.alive && waiting && now - conn.last_progress > options_.task_timeout) {
        drop(conn, "timed out");
      }
    }
  }

  std::vector<tiling::Tile> tiles_;
  FusionMethod method_;
  tiling::TileGrid grid_;
  MasterOptions options_;
  JobStats& stats_;

  std::vector<Connection> conns_;
  std::deque<int> pending_;
  std::vector<int> retries_;
  std::vector<std::optional<MultibandImage>> results_;
  std::size_t done_ = 0;
  std::size_t next_conn_ = 0;
};

}  // namespace

MultibandImage run_master(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                          const tiling::TileGrid& grid, const std::vector<std::string>& workers,
                          const MasterOptions& options, JobStats* stats) {
  if (workers.empty()) fail(ErrorCode::NoWorkers, "worker list is empty");
  if (options.max_in_flight < 1) fail(ErrorCode::InvalidArgument, "max_in_flight must be >= 1");

  const MultibandImage prepared = prepare_ms(ms, method, pan.width(), pan.height());
  JobStats local_stats;
  Coordinator job(tiling::split(pan, prepared, grid), method, grid, options,
                  stats != nullptr ? *stats : local_stats);
  job.connect(workers);
  std::vector<tiling::FusedTile> fused;
  try {
    fused = job.run();
  } catch (...) {
    job.finish();
    throw;
  }
  job.finish();
  return tiling::merge(fused, grid);
}

void send_shutdown(const std::string& endpoint, std::chrono::milliseconds timeout) {
  auto sock = net::connect_to(net::parse_endpoint(endpoint), timeout);
  sock.send_all(wire::encode_message({wire::MsgType::Shutdown, {}}));
}

}  // namespace wavefuse::cluster
