#include "dwt_kernels.hpp"

#include <string>

#include "wavefuse/error.hpp"

namespace wavefuse::kernels {

void check_length(int n, WaveletKind kind) {
  if (n % 2 != 0) fail(ErrorCode::OddLength, "signal length " + std::to_string(n));
  if (n < min_length(kind)) {
    fail(ErrorCode::TooShort, std::string(wavelet_name(kind)) + " needs at least " +
                                  std::to_string(min_length(kind)) + " samples, got " +
                                  std::to_string(n));
  }
}

void check_plane(int width, int height, WaveletKind kind) {
  if (width % 2 != 0 || height % 2 != 0) {
    fail(ErrorCode::OddDimension, std::to_string(width) + "x" + std::to_string(height));
  }
  if (width < min_length(kind) || height < min_length(kind)) {
    fail(ErrorCode::TooSmall, std::string(wavelet_name(kind)) + " needs at least " +
                                  std::to_string(min_length(kind)) + " pixels per side, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
  }
}

template <std::floating_point T>
void forward_line(const T* s, T* out, int n, WaveletKind kind,
                  const FilterBank<double>& fb) noexcept {
  const int half = n / 2;
  if (kind == WaveletKind::Haar) {
    for (int i = 0; i < half; ++i) {
      out[i] = (s[2 * i] + s[2 * i + 1]) / T(2);
      out[half + i] = (s[2 * i] - s[2 * i + 1]) / T(2);
    }
    return;
  }
  const auto& h = fb.h;
  const auto& g = fb.g;
  for (int i = 0; i < half - 1; ++i) {
    const T* w = s + 2 * i;
    out[i] = static_cast<T>(w[0] * h[0] + w[1] * h[1] + w[2] * h[2] + w[3] * h[3]);
    out[half + i] = static_cast<T>(w[0] * g[0] + w[1] * g[1] + w[2] * g[2] + w[3] * g[3]);
  }
  // wrap-around
  out[half - 1] = static_cast<T>(s[n - 2] * h[0] + s[n - 1] * h[1] + s[0] * h[2] + s[1] * h[3]);
  out[n - 1] = static_cast<T>(s[n - 2] * g[0] + s[n - 1] * g[1] + s[0] * g[2] + s[1] * g[3]);
}

template <std::floating_point T>
void inverse_line(const T* c, T* out, int n, WaveletKind kind,
                  const FilterBank<double>& fb) noexcept {
  const int half = n / 2;
  const T* a = c;
  const T* d = c + half;
  if (kind == WaveletKind::Haar) {
    for (int i = 0; i < half; ++i) {
      out[2 * i] = a[i] + d[i];
      out[2 * i + 1] = a[i] - d[i];
    }
    return;
  }
  const auto& t = fb.t;
  const auto& u = fb.u;
  const int last = half - 1;
  out[0] = static_cast<T>(a[last] * t[0] + d[last] * t[1] + a[0] * t[2] + d[0] * t[3]);
  out[1] = static_cast<T>(a[last] * u[0] + d[last] * u[1] + a[0] * u[2] + d[0] * u[3]);
  for (int j = 1; j < half; ++j) {
    out[2 * j] = static_cast<T>(a[j - 1] * t[0] + d[j - 1] * t[1] + a[j] * t[2] + d[j] * t[3]);
    out[2 * j + 1] = static_cast<T>(a[j - 1] * u[0] + d[j - 1] * u[1] + a[j] * u[2] + d[j] * u[3]);
  }
}

template <std::floating_point T>
void forward_rows(const T* in, T* out, int width, int height, WaveletKind kind, int threads) {
  const auto fb = d4_filters<double>();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < height; ++y) {
    const auto offset = static_cast<std::size_t>(y) * width;
    forward_line(in + offset, out + offset, width, kind, fb);
  }
}

template <std::floating_point T>
void inverse_rows(const T* in, T* out, int width, int height, WaveletKind kind, int threads) {
  const auto fb = d4_filters<double>();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < height; ++y) {
    const auto offset = static_cast<std::size_t>(y) * width;
    inverse_line(in + offset, out + offset, width, kind, fb);
  }
}

template <std::floating_point T>
void forward_columns(const T* in, T* out, int width, int height, WaveletKind kind, int threads) {
  const auto fb = d4_filters<double>();
  const int half = height / 2;
  const auto row = [&](const T* base, int y) { return base + static_cast<std::size_t>(y) * width; };

#pragma omp parallel for num_threads(threads) schedule(static)
  for (int i = 0; i < half; ++i) {
    T* approx = out + static_cast<std::size_t>(i) * width;
    T* detail = out + static_cast<std::size_t>(half + i) * width;
    if (kind == WaveletKind::Haar) {
      const T* r0 = row(in, 2 * i);
      const T* r1 = row(in, 2 * i + 1);
      for (int x = 0; x < width; ++x) {
        approx[x] = (r0[x] + r1[x]) / T(2);
        detail[x] = (r0[x] - r1[x]) / T(2);
      }
    } else {
      const auto& h = fb.h;
      const auto& g = fb.g;
      const T* r0 = row(in, 2 * i);
      const T* r1 = row(in, 2 * i + 1);
      const T* r2 = row(in, (2 * i + 2) % height);
      const T* r3 = row(in, (2 * i + 3) % height);
      for (int x = 0; x < width; ++x) {
        approx[x] = static_cast<T>(r0[x] * h[0] + r1[x] * h[1] + r2[x] * h[2] + r3[x] * h[3]);
        detail[x] = static_cast<T>(r0[x] * g[0] + r1[x] * g[1] + r2[x] * g[2] + r3[x] * g[3]);
      }
    }
  }
}

template <std::floating_point T>
void inverse_columns(const T* in, T* out, int width, int height, WaveletKind kind, int threads) {
  const auto fb = d4_filters<double>();
  const int half = height / 2;
  const auto row = [&](const T* base, int y) { return base + static_cast<std::size_t>(y) * width; };

#pragma omp parallel for num_threads(threads) schedule(static)
  for (int j = 0; j < half; ++j) {
    T* even = out + static_cast<std::size_t>(2 * j) * width;
    T* odd = out + static_cast<std::size_t>(2 * j + 1) * width;
    if (kind == WaveletKind::Haar) {
      const T* a = row(in, j);
      const T* d = row(in, half + j);
      for (int x = 0; x < width; ++x) {
        even[x] = a[x] + d[x];
        odd[x] = a[x] - d[x];
      }
    } else {
      const auto& t = fb.t;
      const auto& u = fb.u;
      const int prev = (j + half - 1) % half;
      const T* ap = row(in, prev);
      const T* dp = row(in, half + prev);
      const T* a = row(in, j);
      const T* d = row(in, half + j);
      for (int x = 0; x < width; ++x) {
        even[x] = static_cast<T>(ap[x] * t[0] + dp[x] * t[1] + a[x] * t[2] + d[x] * t[3]);
        odd[x] = static_cast<T>(ap[x] * u[0] + dp[x] * u[1] + a[x] * u[2] + d[x] * u[3]);
      }
    }
  }
}

#define WAVEFUSE_INSTANTIATE(T)                                               \
  template void forward_line<T>(const T*, T*, int, WaveletKind,               \
                                const FilterBank<double>&) noexcept;          \
  template void inverse_line<T>(const T*, T*, int, WaveletKind,               \
                                const FilterBank<double>&) noexcept;          \
  template void forward_rows<T>(const T*, T*, int, int, WaveletKind, int);    \
  template void inverse_rows<T>(const T*, T*, int, int, WaveletKind, int);    \
  template void forward_columns<T>(const T*, T*, int, int, WaveletKind, int); \
  template void inverse_columns<T>(const T*, T*, int, int, WaveletKind, int);

WAVEFUSE_INSTANTIATE(float)
WAVEFUSE_INSTANTIATE(double)
#undef WAVEFUSE_INSTANTIATE

}  // namespace wavefuse::kernels
