#pragma once

#include <array>
#include <concepts>
#include <span>
#include <string_view>
#include <vector>

#include "wavefuse/image.hpp"

namespace wavefuse {

enum class WaveletKind { Haar, Daubechies4 };

std::string_view wavelet_name(WaveletKind kind) noexcept;

/// Daubechies-4 analysis (h, g) and synthesis (t, u) filters.
///
/// h is the D4 scaling filter, g its quadrature mirror g_k = (-1)^k h_{3-k}.
/// The synthesis pairs interleave them so that one output sample needs only
/// two approximation and two detail coefficients:
///   t = (h2, g2, h0, g0) produces even samples,
///   u = (h3, g3, h1, g1) produces odd samples.
template <std::floating_point T>
struct FilterBank {
  std::array<T, 4> h;
  std::array<T, 4> g;
  std::array<T, 4> t;
  std::array<T, 4> u;
};

/// Computed in double, narrowed to T.
template <std::floating_point T>
FilterBank<T> d4_filters();

/// Smallest even signal length each kind accepts.
int min_length(WaveletKind kind) noexcept;

/// Gain of a constant signal through the 2D forward transform, as seen in
/// the LL quadrant: 1 for Haar (averaging normalization), 2 for D4 (sqrt 2
/// per pass).
double ll_gain(WaveletKind kind) noexcept;

// Single-level 1D transforms. Output packs approximations in [0, N/2) and
// details in [N/2, N). D4 wraps periodically at the end of the signal.
template <std::floating_point T>
std::vector<T> dwt1d_forward(std::span<const T> signal, WaveletKind kind);
template <std::floating_point T>
std::vector<T> dwt1d_inverse(std::span<const T> coeffs, WaveletKind kind);

// Single-level 2D transforms on a row-major width x height buffer. Forward
// runs rows then columns, inverse runs columns then rows; the LL quadrant
// sits at the top-left. `out` must not alias `in`.
template <std::floating_point T>
void dwt2d_forward(std::span<const T> in, std::span<T> out, int width, int height, WaveletKind kind,
                   Exec exec = {});
template <std::floating_point T>
void dwt2d_inverse(std::span<const T> in, std::span<T> out, int width, int height, WaveletKind kind,
                   Exec exec = {});

Plane dwt2d_forward(const Plane& plane, WaveletKind kind, Exec exec = {});
Plane dwt2d_inverse(const Plane& coeffs, WaveletKind kind, Exec exec = {});

}  // namespace wavefuse
