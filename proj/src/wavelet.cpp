#include "wavefuse/wavelet.hpp"

#include <cmath>
#include <vector>

#include "dwt_kernels.hpp"
#include "wavefuse/error.hpp"

namespace wavefuse {

std::string_view wavelet_name(WaveletKind kind) noexcept {
  return kind == WaveletKind::Haar ? "Haar" : "Daubechies4";
}

template <std::floating_point T>
FilterBank<T> d4_filters() {
  const double r3 = std::sqrt(3.0);
  const double denom = 4.0 * std::sqrt(2.0);
  const std::array<double, 4> h = {(1.0 + r3) / denom, (3.0 + r3) / denom, (3.0 - r3) / denom,
                                   (1.0 - r3) / denom};
  const std::array<double, 4> g = {h[3], -h[2], h[1], -h[0]};

  FilterBank<T> fb{};
  for (int k = 0; k < 4; ++k) {
    fb.h[k] = static_cast<T>(h[k]);
    fb.g[k] = static_cast<T>(g[k]);
  }
  fb.t = {fb.h[2], fb.g[2], fb.h[0], fb.g[0]};
  fb.u = {fb.h[3], fb.g[3], fb.h[1], fb.g[1]};
  return fb;
}

int min_length(WaveletKind kind) noexcept { return kind == WaveletKind::Haar ? 2 : 4; }

double ll_gain(WaveletKind kind) noexcept { return kind == WaveletKind::Haar ? 1.0 : 2.0; }

template <std::floating_point T>
std::vector<T> dwt1d_forward(std::span<const T> signal, WaveletKind kind) {
  const int n = static_cast<int>(signal.size());
  kernels::check_length(n, kind);
  std::vector<T> out(signal.size());
  kernels::forward_line(signal.data(), out.data(), n, kind, d4_filters<double>());
  return out;
}

template <std::floating_point T>
std::vector<T> dwt1d_inverse(std::span<const T> coeffs, WaveletKind kind) {
  const int n = static_cast<int>(coeffs.size());
  kernels::check_length(n, kind);
  std::vector<T> out(coeffs.size());
  kernels::inverse_line(coeffs.data(), out.data(), n, kind, d4_filters<double>());
  return out;
}

namespace {
template <std::floating_point T>
void check_buffers(std::span<const T> in, std::span<T> out, int width, int height) {
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (width <= 0 || height <= 0 || in.size() != n || out.size() != n) {
    fail(ErrorCode::DimensionMismatch, "buffer size does not match plane dimensions");
  }
}
}  // namespace

template <std::floating_point T>
void dwt2d_forward(std::span<const T> in, std::span<T> out, int width, int height, WaveletKind kind,
                   Exec exec) {
  kernels::check_plane(width, height, kind);
  check_buffers(in, out, width, height);
  std::vector<T> rows(in.size());
  const int threads = exec.resolved();
  // Row pass completes before the column pass starts.
  kernels::forward_rows(in.data(), rows.data(), width, height, kind, threads);
  kernels::forward_columns(rows.data(), out.data(), width, height, kind, threads);
}

template <std::floating_point T>
void dwt2d_inverse(std::span<const T> in, std::span<T> out, int width, int height, WaveletKind kind,
                   Exec exec) {
  kernels::check_plane(width, height, kind);
  check_buffers(in, out, width, height);
  std::vector<T> cols(in.size());
  const int threads = exec.resolved();
  kernels::inverse_columns(in.data(), cols.data(), width, height, kind, threads);
  kernels::inverse_rows(cols.data(), out.data(), width, height, kind, threads);
}

Plane dwt2d_forward(const Plane& plane, WaveletKind kind, Exec exec) {
  Plane out(plane.width(), plane.height());
  dwt2d_forward<float>(plane.samples(), out.samples(), plane.width(), plane.height(), kind, exec);
  return out;
}

Plane dwt2d_inverse(const Plane& coeffs, WaveletKind kind, Exec exec) {
  Plane out(coeffs.width(), coeffs.height());
  dwt2d_inverse<float>(coeffs.samples(), out.samples(), coeffs.width(), coeffs.height(), kind,
                       exec);
  return out;
}

template FilterBank<float> d4_filters<float>();
template FilterBank<double> d4_filters<double>();
template std::vector<float> dwt1d_forward<float>(std::span<const float>, WaveletKind);
template std::vector<double> dwt1d_forward<double>(std::span<const double>, WaveletKind);
template std::vector<float> dwt1d_inverse<float>(std::span<const float>, WaveletKind);
template std::vector<double> dwt1d_inverse<double>(std::span<const double>, WaveletKind);
template void dwt2d_forward<float>(std::span<const float>, std::span<float>, int, int, WaveletKind,
                                   Exec);
template void dwt2d_forward<double>(std::span<const double>, std::span<double>, int, int,
                                    WaveletKind, Exec);
template void dwt2d_inverse<float>(std::span<const float>, std::span<float>, int, int, WaveletKind,
                                   Exec);
template void dwt2d_inverse<double>(std::span<const double>, std::span<double>, int, int,
                                    WaveletKind, Exec);

}  // namespace wavefuse
