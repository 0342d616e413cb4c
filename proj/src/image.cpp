#include "wavefuse/image.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "wavefuse/error.hpp"

namespace wavefuse {

namespace {
void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::InvalidArgument, "raster dimensions must be positive, got " +
                                         std::to_string(width) + "x" + std::to_string(height));
  }
}
}  // namespace

Raster8::Raster8(int width, int height, int channels)
    : Raster8(width, height, channels,
              std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                        std::max(height, 0) * std::max(channels, 0))) {}

Raster8::Raster8(int width, int height, int channels, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    fail(ErrorCode::InvalidArgument, "channels must be 1 or 3");
  }
  if (samples_.size() != static_cast<std::size_t>(width) * height * channels) {
    fail(ErrorCode::DimensionMismatch, "sample count does not match raster shape");
  }
}

Plane::Plane(int width, int height, float fill) : width_(width), height_(height) {
  check_dims(width, height);
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane::Plane(int width, int height, std::vector<float> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_dims(width, height);
  if (samples_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::DimensionMismatch, "sample count does not match plane shape");
  }
}

bool Plane::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](float v) { return std::isfinite(v); });
}

MultibandImage::MultibandImage(std::vector<Plane> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) fail(ErrorCode::InvalidArgument, "multiband image needs at least one band");
  for (const auto& b : bands_) {
    if (!b.same_shape(bands_.front())) {
      fail(ErrorCode::DimensionMismatch, "bands of a multiband image must share dimensions");
    }
  }
}

int Exec::resolved() const noexcept { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace wavefuse
