#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wavefuse {

/// 8-bit raster, row-major, channel-interleaved. This is the storage and
/// wire representation; computation never happens on it directly.
class Raster8 {
 public:
  Raster8(int width, int height, int channels);
  Raster8(int width, int height, int channels, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }

  bool operator==(const Raster8&) const = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> samples_;
};

/// Single-band 32-bit float raster on the native 0..255 scale, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, float fill = 0.0f);
  Plane(int width, int height, std::vector<float> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }

  float operator()(int x, int y) const noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  float& operator()(int x, int y) noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const float> samples() const noexcept { return samples_; }
  std::span<float> samples() noexcept { return samples_; }
  std::span<const float> row(int y) const noexcept {
    return std::span<const float>(samples_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<float> row(int y) noexcept {
    return std::span<float>(samples_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const noexcept;

  bool operator==(const Plane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> samples_;
};

/// Ordered bands sharing one shape: MS input or fused output.
class MultibandImage {
 public:
  MultibandImage() = default;
  explicit MultibandImage(std::vector<Plane> bands);

  int width() const noexcept { return bands_.front().width(); }
  int height() const noexcept { return bands_.front().height(); }
  std::size_t band_count() const noexcept { return bands_.size(); }

  const Plane& band(std::size_t k) const { return bands_.at(k); }
  Plane& band(std::size_t k) { return bands_.at(k); }
  const std::vector<Plane>& bands() const noexcept { return bands_; }

  bool operator==(const MultibandImage&) const = default;

 private:
  std::vector<Plane> bands_;
};

/// Thread budget for OpenMP kernels. `threads == 0` uses the OpenMP default.
struct Exec {
  int threads = 0;

  int resolved() const noexcept;
  static Exec serial() noexcept { return Exec{1}; }
};

}  // namespace wavefuse
