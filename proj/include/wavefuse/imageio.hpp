#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wavefuse/image.hpp"

namespace wavefuse::imageio {

/// Parses binary PGM (P5) or PPM (P6) with maxval 255. Header comments
/// (`#` to end of line) are accepted anywhere whitespace is.
Raster8 read_pnm(std::span<const std::uint8_t> bytes);

/// Emits P5 for one channel, P6 for three, always `P?\nW H\n255\n` + payload.
std::vector<std::uint8_t> write_pnm(const Raster8& raster);

Raster8 load_pnm(const std::filesystem::path& path);
void save_pnm(const std::filesystem::path& path, const Raster8& raster);

/// Lifts one channel into the float compute representation (no rescaling).
Plane to_plane(const Raster8& raster, int channel);

/// Clamp to [0,255], then round half away from zero.
Raster8 quantize(const Plane& plane);

/// Single-sample form of `quantize`.
std::uint8_t quantize_sample(float v) noexcept;

/// Interleaves three planes into a P6-ready raster, quantizing each.
Raster8 quantize_rgb(const Plane& r, const Plane& g, const Plane& b);

/// Snaps every sample onto the 8-bit lattice while staying in float.
Plane quantize_roundtrip(const Plane& plane);
MultibandImage quantize_roundtrip(const MultibandImage& image);

}  // namespace wavefuse::imageio
