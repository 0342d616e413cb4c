#include "wavefuse/app/padding.hpp"

#include <algorithm>

#include "wavefuse/error.hpp"

namespace wavefuse::app {

namespace {
int round_up(int v, int multiple) { return (v + multiple - 1) / multiple * multiple; }
int ceil_div(long long num, long long den) { return static_cast<int>((num + den - 1) / den); }
}  // namespace

Plane pad_edge(const Plane& p, int width, int height) {
  if (width < p.width() || height < p.height()) {
    fail(ErrorCode::InvalidArgument, "padding cannot shrink a plane");
  }
  if (width == p.width() && height == p.height()) return p;
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto src = p.row(std::min(y, p.height() - 1));
    auto dst = out.row(y);
    std::copy(src.begin(), src.end(), dst.begin());
    std::fill(dst.begin() + p.width(), dst.end(), src.back());
  }
  return out;
}

PaddedJob pad_for_grid(const Plane& pan, const MultibandImage& ms, int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) fail(ErrorCode::InvalidArgument, "grid must be at least 1x1");
  PaddedJob job;
  job.original_w = pan.width();
  job.original_h = pan.height();
  const int w = round_up(pan.width(), 2 * grid_w);
  const int h = round_up(pan.height(), 2 * grid_h);
  job.grid = tiling::plan_grid(w, h, grid_w, grid_h);
  if (w == pan.width() && h == pan.height()) {
    job.pan = pan;
    job.ms = ms;
    return job;
  }
  job.padded = true;
  job.pan = pad_edge(pan, w, h);
  const int ms_w =
      ms.width() + ceil_div(static_cast<long long>(w - pan.width()) * ms.width(), pan.width());
  const int ms_h =
      ms.height() + ceil_div(static_cast<long long>(h - pan.height()) * ms.height(), pan.height());
  std::vector<Plane> bands;
  for (const auto& b : ms.bands()) bands.push_back(pad_edge(b, ms_w, ms_h));
  job.ms = MultibandImage(std::move(bands));
  return job;
}

MultibandImage crop_bands(const MultibandImage& image, int width, int height) {
  if (width == image.width() && height == image.height()) return image;
  std::vector<Plane> bands;
  for (const auto& b : image.bands()) bands.push_back(tiling::crop(b, 0, 0, width, height));
  return MultibandImage(std::move(bands));
}

}  // namespace wavefuse::app
