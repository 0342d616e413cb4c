#include "wavefuse/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "wavefuse/error.hpp"
#include "wavefuse/imageio.hpp"

namespace wavefuse::tiling {

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

void require_grid_shape(const Plane& pan, const TileGrid& grid) {
  if (pan.width() != grid.pan_w() || pan.height() != grid.pan_h()) {
    fail(ErrorCode::DimensionMismatch, "PAN " + dims(pan.width(), pan.height()) +
                                           " does not match grid " +
                                           dims(grid.pan_w(), grid.pan_h()));
  }
}

}  // namespace

TileGrid plan_grid(int pan_w, int pan_h, int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) {
    fail(ErrorCode::InvalidArgument, "grid " + dims(grid_w, grid_h) + " must be at least 1x1");
  }
  if (pan_w <= 0 || pan_h <= 0) fail(ErrorCode::InvalidArgument, "PAN " + dims(pan_w, pan_h));
  if (pan_w % grid_w != 0 || pan_h % grid_h != 0) {
    fail(ErrorCode::NotDivisible, "PAN " + dims(pan_w, pan_h) + " by grid " + dims(grid_w, grid_h));
  }
  TileGrid grid;
  grid.grid_w = grid_w;
  grid.grid_h = grid_h;
  grid.pan_tile_w = pan_w / grid_w;
  grid.pan_tile_h = pan_h / grid_h;
  if (grid.pan_tile_w % 2 != 0 || grid.pan_tile_h % 2 != 0) {
    fail(ErrorCode::OddTile, "tile " + dims(grid.pan_tile_w, grid.pan_tile_h));
  }
  grid.ms_tile_w = grid.pan_tile_w / 2;
  grid.ms_tile_h = grid.pan_tile_h / 2;
  return grid;
}

Plane crop(const Plane& p, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > p.width() || y0 + h > p.height()) {
    fail(ErrorCode::DimensionMismatch, "crop outside the plane");
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto src = p.row(y0 + y).subspan(x0, w);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

std::vector<Tile> split(const Plane& pan, const MultibandImage& ms, const TileGrid& grid) {
  require_grid_shape(pan, grid);
  int ms_tw = 0;
  int ms_th = 0;
  if (ms.width() == grid.grid_w * grid.ms_tile_w && ms.height() == grid.grid_h * grid.ms_tile_h) {
    ms_tw = grid.ms_tile_w;
    ms_th = grid.ms_tile_h;
  } else if (ms.width() == pan.width() && ms.height() == pan.height()) {
    ms_tw = grid.pan_tile_w;
    ms_th = grid.pan_tile_h;
  } else {
    fail(ErrorCode::DimensionMismatch, "MS " + dims(ms.width(), ms.height()) +
                                           " is neither half nor full PAN size for this grid");
  }

  std::vector<Tile> tiles;
  tiles.reserve(grid.tile_count());
  for (int r = 0; r < grid.grid_h; ++r) {
    for (int c = 0; c < grid.grid_w; ++c) {
      std::vector<Plane> bands;
      for (const auto& b : ms.bands()) bands.push_back(crop(b, c * ms_tw, r * ms_th, ms_tw, ms_th));
      tiles.push_back(Tile{
          {r, c},
          crop(pan, c * grid.pan_tile_w, r * grid.pan_tile_h, grid.pan_tile_w, grid.pan_tile_h),
          MultibandImage(std::move(bands))});
    }
  }
  return tiles;
}

MultibandImage merge(const std::vector<FusedTile>& tiles, const TileGrid& grid) {
  std::vector<const FusedTile*> slots(grid.tile_count(), nullptr);
  for (const auto& t : tiles) {
    if (t.index.row < 0 || t.index.row >= grid.grid_h || t.index.col < 0 ||
        t.index.col >= grid.grid_w) {
      fail(ErrorCode::DimensionMismatch, "tile index outside the grid");
    }
    auto& slot = slots[t.index.row * grid.grid_w + t.index.col];
    if (slot != nullptr) fail(ErrorCode::InvalidArgument, "duplicate tile index");
    if (t.image.width() != grid.pan_tile_w || t.image.height() != grid.pan_tile_h) {
      fail(ErrorCode::DimensionMismatch, "tile " + dims(t.image.width(), t.image.height()) +
                                             " expected " + dims(grid.pan_tile_w, grid.pan_tile_h));
    }
    slot = &t;
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == nullptr) {
      fail(ErrorCode::MissingTile, "tile (" + std::to_string(i / grid.grid_w) + "," +
                                       std::to_string(i % grid.grid_w) + ")");
    }
  }
  const std::size_t bands = slots.front()->image.band_count();
  std::vector<Plane> out(bands, Plane(grid.pan_w(), grid.pan_h()));
  for (const auto* t : slots) {
    if (t->image.band_count() != bands)
      fail(ErrorCode::DimensionMismatch, "tile band counts differ");
    const int x0 = t->index.col * grid.pan_tile_w;
    const int y0 = t->index.row * grid.pan_tile_h;
    for (std::size_t k = 0; k < bands; ++k) {
      for (int y = 0; y < grid.pan_tile_h; ++y) {
        const auto src = t->image.band(k).row(y);
        std::copy(src.begin(), src.end(), out[k].row(y0 + y).begin() + x0);
      }
    }
  }
  return MultibandImage(std::move(out));
}

MultibandImage fuse_tile(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                         Exec exec, Transfer transfer) {
  if (transfer == Transfer::Float32) return fuse(pan, ms, method, exec);
  const MultibandImage fused =
      fuse(imageio::quantize_roundtrip(pan), imageio::quantize_roundtrip(ms), method, exec);
  return imageio::quantize_roundtrip(fused);
}

MultibandImage fuse_tiled(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                          const TileGrid& grid, int workers, Transfer transfer) {
  if (workers < 1) fail(ErrorCode::InvalidArgument, "workers must be >= 1");
  require_grid_shape(pan, grid);

  const MultibandImage prepared = prepare_ms(ms, method, pan.width(), pan.height(), Exec{workers});
  const std::vector<Tile> tiles = split(pan, prepared, grid);

  // Thread budget: tiles spread over the pool, leftover threads go to the
  // kernels inside each tile.
  const int pool = std::min(workers, grid.tile_count());
  const Exec kernel_exec{std::max(1, workers / pool)};

  std::vector<std::optional<FusedTile>> results(tiles.size());
  std::vector<std::exception_ptr> errors(tiles.size());
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t i = next++; i < tiles.size(); i = next++) {
      try {
        results[i] = FusedTile{tiles[i].index,
                               fuse_tile(tiles[i].pan, tiles[i].ms, method, kernel_exec, transfer)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    for (int t = 1; t < pool; ++t) threads.emplace_back(run);
    run();
  }
  // Report the lowest-index failure so errors are deterministic too.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<FusedTile> fused;
  fused.reserve(results.size());
  for (auto& r : results) fused.push_back(std::move(*r));
  return merge(fused, grid);
}

}  // namespace wavefuse::tiling
