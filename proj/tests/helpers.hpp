#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wavefuse/image.hpp"

namespace wavefuse::testing {

inline Plane random_plane(int w, int h, std::mt19937& rng, float lo = 0.0f, float hi = 255.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  Plane p(w, h);
  for (auto& v : p.samples()) v = dist(rng);
  return p;
}

// Integer-valued samples, i.e. what a decoded 8-bit file gives.
inline Plane random_plane8(int w, int h, std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(0, 255);
  Plane p(w, h);
  for (auto& v : p.samples()) v = static_cast<float>(dist(rng));
  return p;
}

inline MultibandImage random_bands(int w, int h, int bands, std::mt19937& rng) {
  std::vector<Plane> out;
  for (int k = 0; k < bands; ++k) out.push_back(random_plane8(w, h, rng));
  return MultibandImage(std::move(out));
}

inline double max_abs_diff(const Plane& a, const Plane& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a.samples()[i]) - b.samples()[i]));
  }
  return m;
}

inline double max_abs_diff(const MultibandImage& a, const MultibandImage& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.band_count(); ++k)
    m = std::max(m, max_abs_diff(a.band(k), b.band(k)));
  return m;
}

// Dense single-level analysis operator, built straight from the filter
// definitions rather than through the library. Row i < N/2 is the
// approximation tap pattern at offset 2i, row N/2 + i the detail one.
using Matrix = std::vector<std::vector<double>>;

inline std::vector<double> d4_h() {
  const double r3 = std::sqrt(3.0);
  const double den = 4.0 * std::sqrt(2.0);
  return {(1 + r3) / den, (3 + r3) / den, (3 - r3) / den, (1 - r3) / den};
}

// Quadrature mirror: g_k = (-1)^k h_{3-k}.
inline std::vector<double> d4_g() {
  const auto h = d4_h();
  std::vector<double> g(4);
  for (int k = 0; k < 4; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[3 - k];
  return g;
}

inline Matrix analysis_matrix(int n, bool d4) {
  Matrix a(n, std::vector<double>(n, 0.0));
  const std::vector<double> h = d4 ? d4_h() : std::vector<double>{0.5, 0.5};
  const std::vector<double> g = d4 ? d4_g() : std::vector<double>{0.5, -0.5};
  for (int i = 0; i < n / 2; ++i) {
    for (std::size_t k = 0; k < h.size(); ++k) {
      a[i][(2 * i + k) % n] += h[k];
      a[n / 2 + i][(2 * i + k) % n] += g[k];
    }
  }
  return a;
}

// Gauss-Jordan with partial pivoting.
inline Matrix invert(Matrix m) {
  const std::size_t n = m.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    std::swap(m[c], m[p]);
    std::swap(inv[c], inv[p]);
    const double d = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0.0) continue;
      const double f = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

inline std::vector<double> apply(const Matrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

}  // namespace wavefuse::testing
