#pragma once

// OpenMP plane kernels behind the public wavelet API. Every output sample is
// evaluated with the same expression, in the same term order, as the serial
// reference in reference.cpp, so both paths agree bit-for-bit at any thread
// count. D4 taps are applied in double and the sum is rounded once to T.

#include <concepts>

#include "wavefuse/wavelet.hpp"

namespace wavefuse::kernels {

void check_length(int n, WaveletKind kind);
void check_plane(int width, int height, WaveletKind kind);

// One signal of length n (even), contiguous.
template <std::floating_point T>
void forward_line(const T* s, T* out, int n, WaveletKind kind,
                  const FilterBank<double>& fb) noexcept;
template <std::floating_point T>
void inverse_line(const T* c, T* out, int n, WaveletKind kind,
                  const FilterBank<double>& fb) noexcept;

// Row pass: every row of a width x height buffer, in parallel over rows.
template <std::floating_point T>
void forward_rows(const T* in, T* out, int width, int height, WaveletKind kind, int threads);
template <std::floating_point T>
void inverse_rows(const T* in, T* out, int width, int height, WaveletKind kind, int threads);

// Column pass evaluated as whole-row vector operations, in parallel over
// output rows.
template <std::floating_point T>
void forward_columns(const T* in, T* out, int width, int height, WaveletKind kind, int threads);
template <std::floating_point T>
void inverse_columns(const T* in, T* out, int width, int height, WaveletKind kind, int threads);

}  // namespace wavefuse::kernels
