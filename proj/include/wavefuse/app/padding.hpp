#pragma once

#include "wavefuse/image.hpp"
#include "wavefuse/tiling.hpp"

namespace wavefuse::app {

/// Edge-replicating pad on the right and bottom.
Plane pad_edge(const Plane& p, int width, int height);

/// A PAN/MS pair grown so that the PAN splits into equal, even tiles.
struct PaddedJob {
  Plane pan;
  MultibandImage ms;
  tiling::TileGrid grid;
  int original_w = 0;
  int original_h = 0;
  bool padded = false;
};

/// PAN is padded up to the next multiple of 2*grid per axis. MS grows by the
/// same amount scaled by its MS/PAN size ratio (rounded up). Inputs that
/// already fit are passed through untouched.
PaddedJob pad_for_grid(const Plane& pan, const MultibandImage& ms, int grid_w, int grid_h);

MultibandImage crop_bands(const MultibandImage& image, int width, int height);

}  // namespace wavefuse::app
