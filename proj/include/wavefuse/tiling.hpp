#pragma once

#include <compare>
#include <vector>

#include "wavefuse/fusion.hpp"
#include "wavefuse/image.hpp"

namespace wavefuse::tiling {

/// Equal-parts partition of a PAN/MS pair. Tiles are indexed row-major.
struct TileGrid {
  int grid_w = 1;
  int grid_h = 1;
  int pan_tile_w = 0;
  int pan_tile_h = 0;
  int ms_tile_w = 0;  // native MS tile, half the PAN tile
  int ms_tile_h = 0;

  int tile_count() const noexcept { return grid_w * grid_h; }
  int pan_w() const noexcept { return grid_w * pan_tile_w; }
  int pan_h() const noexcept { return grid_h * pan_tile_h; }
};

struct TileIndex {
  int row = 0;
  int col = 0;
  auto operator<=>(const TileIndex&) const = default;
};

struct Tile {
  TileIndex index;
  Plane pan;
  MultibandImage ms;
};

struct FusedTile {
  TileIndex index;
  MultibandImage image;
};

/// How tile data travels between split and merge. Quantized8 snaps tile
/// inputs and fused tiles onto the 8-bit lattice, exactly as the cluster
/// wire format does.
enum class Transfer { Float32, Quantized8 };

TileGrid plan_grid(int pan_w, int pan_h, int grid_w, int grid_h);

Plane crop(const Plane& p, int x0, int y0, int w, int h);

/// Row-major list of crops. The MS image may be at the native half
/// resolution or already resampled to PAN size; its crops are taken at the
/// matching scale.
std::vector<Tile> split(const Plane& pan, const MultibandImage& ms, const TileGrid& grid);

/// Places every fused tile by its index; arrival order is irrelevant.
MultibandImage merge(const std::vector<FusedTile>& tiles, const TileGrid& grid);

/// The work one node does for one tile.
MultibandImage fuse_tile(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                         Exec exec, Transfer transfer);

/// Resamples MS to the method's working size once for the whole scene, splits,
/// fuses the tiles on a pool of `workers` threads and merges by index.
/// Output does not depend on the worker count.
MultibandImage fuse_tiled(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                          const TileGrid& grid, int workers, Transfer transfer = Transfer::Float32);

}  // namespace wavefuse::tiling
