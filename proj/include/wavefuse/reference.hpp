#pragma once

// Serial reference implementations. Straight per-vector loops with periodic
// indexing and no OpenMP; the production kernels are checked against these
// bit-for-bit, and the kernel benchmark times both.

#include <concepts>
#include <span>
#include <vector>

#include "wavefuse/fusion.hpp"
#include "wavefuse/image.hpp"
#include "wavefuse/wavelet.hpp"

namespace wavefuse::reference {

template <std::floating_point T>
std::vector<T> dwt1d_forward(const std::vector<T>& s, WaveletKind kind);
template <std::floating_point T>
std::vector<T> dwt1d_inverse(const std::vector<T>& c, WaveletKind kind);

// 2D via explicit row and column extraction.
template <std::floating_point T>
std::vector<T> dwt2d_forward(const std::vector<T>& in, int width, int height, WaveletKind kind);
template <std::floating_point T>
std::vector<T> dwt2d_inverse(const std::vector<T>& in, int width, int height, WaveletKind kind);

Plane resample_bilinear(const Plane& p, int out_w, int out_h);

MultibandImage fuse(const Plane& pan, const MultibandImage& ms, const FusionMethod& method);

}  // namespace wavefuse::reference
