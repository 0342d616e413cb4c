#include "wavefuse/reference.hpp"

#include <algorithm>
#include <cmath>

#include "dwt_kernels.hpp"
#include "wavefuse/error.hpp"

namespace wavefuse::reference {

template <std::floating_point T>
std::vector<T> dwt1d_forward(const std::vector<T>& s, WaveletKind kind) {
  const int n = static_cast<int>(s.size());
  kernels::check_length(n, kind);
  const int half = n / 2;
  std::vector<T> out(s.size());
  if (kind == WaveletKind::Haar) {
    for (int i = 0; i < half; ++i) {
      out[i] = (s[2 * i] + s[2 * i + 1]) / T(2);
      out[half + i] = (s[2 * i] - s[2 * i + 1]) / T(2);
    }
    return out;
  }
  const auto fb = d4_filters<double>();
  const auto at = [&](int k) { return s[k % n]; };
  for (int i = 0; i < half; ++i) {
    const int b = 2 * i;
    const double s0 = at(b), s1 = at(b + 1), s2 = at(b + 2), s3 = at(b + 3);
    out[i] = static_cast<T>(s0 * fb.h[0] + s1 * fb.h[1] + s2 * fb.h[2] + s3 * fb.h[3]);
    out[half + i] = static_cast<T>(s0 * fb.g[0] + s1 * fb.g[1] + s2 * fb.g[2] + s3 * fb.g[3]);
  }
  return out;
}

template <std::floating_point T>
std::vector<T> dwt1d_inverse(const std::vector<T>& c, WaveletKind kind) {
  const int n = static_cast<int>(c.size());
  kernels::check_length(n, kind);
  const int half = n / 2;
  std::vector<T> out(c.size());
  if (kind == WaveletKind::Haar) {
    for (int i = 0; i < half; ++i) {
      out[2 * i] = c[i] + c[half + i];
      out[2 * i + 1] = c[i] - c[half + i];
    }
    return out;
  }
  const auto fb = d4_filters<double>();
  for (int j = 0; j < half; ++j) {
    const int p = (j + half - 1) % half;
    const double ap = c[p], dp = c[half + p], a = c[j], d = c[half + j];
    out[2 * j] = static_cast<T>(ap * fb.t[0] + dp * fb.t[1] + a * fb.t[2] + d * fb.t[3]);
    out[2 * j + 1] = static_cast<T>(ap * fb.u[0] + dp * fb.u[1] + a * fb.u[2] + d * fb.u[3]);
  }
  return out;
}

namespace {

template <std::floating_point T, class Fn>
std::vector<T> rows_pass(const std::vector<T>& in, int width, int height, Fn&& fn) {
  std::vector<T> out(in.size());
  std::vector<T> line(width);
  for (int y = 0; y < height; ++y) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(y) * width, width, line.begin());
    const auto res = fn(line);
    std::copy(res.begin(), res.end(), out.begin() + static_cast<std::ptrdiff_t>(y) * width);
  }
  return out;
}

template <std::floating_point T, class Fn>
std::vector<T> columns_pass(const std::vector<T>& in, int width, int height, Fn&& fn) {
  std::vector<T> out(in.size());
  std::vector<T> line(height);
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) line[y] = in[static_cast<std::size_t>(y) * width + x];
    const auto res = fn(line);
    for (int y = 0; y < height; ++y) out[static_cast<std::size_t>(y) * width + x] = res[y];
  }
  return out;
}

}  // namespace

template <std::floating_point T>
std::vector<T> dwt2d_forward(const std::vector<T>& in, int width, int height, WaveletKind kind) {
  kernels::check_plane(width, height, kind);
  const auto fwd = [kind](const std::vector<T>& v) { return dwt1d_forward(v, kind); };
  return columns_pass(rows_pass(in, width, height, fwd), width, height, fwd);
}

template <std::floating_point T>
std::vector<T> dwt2d_inverse(const std::vector<T>& in, int width, int height, WaveletKind kind) {
  kernels::check_plane(width, height, kind);
  const auto inv = [kind](const std::vector<T>& v) { return dwt1d_inverse(v, kind); };
  return rows_pass(columns_pass(in, width, height, inv), width, height, inv);
}

template std::vector<float> dwt1d_forward(const std::vector<float>&, WaveletKind);
template std::vector<double> dwt1d_forward(const std::vector<double>&, WaveletKind);
template std::vector<float> dwt1d_inverse(const std::vector<float>&, WaveletKind);
template std::vector<double> dwt1d_inverse(const std::vector<double>&, WaveletKind);
template std::vector<float> dwt2d_forward(const std::vector<float>&, int, int, WaveletKind);
template std::vector<double> dwt2d_forward(const std::vector<double>&, int, int, WaveletKind);
template std::vector<float> dwt2d_inverse(const std::vector<float>&, int, int, WaveletKind);
template std::vector<double> dwt2d_inverse(const std::vector<double>&, int, int, WaveletKind);

Plane resample_bilinear(const Plane& p, int out_w, int out_h) {
  if (p.width() == out_w && p.height() == out_h) return p;
  Plane out(out_w, out_h);
  const double sx = static_cast<double>(p.width()) / out_w;
  const double sy = static_cast<double>(p.height()) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double fy_src = std::clamp((y + 0.5) * sy - 0.5, 0.0, p.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy_src));
    const int y1 = std::min(y0 + 1, p.height() - 1);
    for (int x = 0; x < out_w; ++x) {
      const double fx_src = std::clamp((x + 0.5) * sx - 0.5, 0.0, p.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx_src));
      const int x1 = std::min(x0 + 1, p.width() - 1);
      const double top = std::lerp(double{p(x0, y0)}, double{p(x1, y0)}, fx_src - x0);
      const double bottom = std::lerp(double{p(x0, y1)}, double{p(x1, y1)}, fx_src - x0);
      out(x, y) = static_cast<float>(std::lerp(top, bottom, fy_src - y0));
    }
  }
  return out;
}

namespace {

std::vector<float> to_vector(const Plane& p) { return {p.samples().begin(), p.samples().end()}; }

Plane fuse_band_dwt(const Plane& pan, const Plane& ms, WaveletKind kind) {
  auto coeffs = dwt2d_forward(to_vector(pan), pan.width(), pan.height(), kind);
  const auto gain = static_cast<float>(ll_gain(kind));
  for (int y = 0; y < ms.height(); ++y) {
    for (int x = 0; x < ms.width(); ++x) {
      coeffs[static_cast<std::size_t>(y) * pan.width() + x] = ms(x, y) * gain;
    }
  }
  return Plane(pan.width(), pan.height(), dwt2d_inverse(coeffs, pan.width(), pan.height(), kind));
}

}  // namespace

MultibandImage fuse(const Plane& pan, const MultibandImage& ms, const FusionMethod& method) {
  const Size target = working_size(method, pan.width(), pan.height());
  std::vector<Plane> up;
  for (const auto& b : ms.bands())
    up.push_back(reference::resample_bilinear(b, target.width, target.height));

  std::vector<Plane> fused;
  if (const auto* wa = std::get_if<WeightedAverage>(&method)) {
    for (const auto& m : up) {
      Plane out(pan.width(), pan.height());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples()[i] = wa->weight * pan.samples()[i] + (1.0f - wa->weight) * m.samples()[i];
      }
      fused.push_back(std::move(out));
    }
  } else if (std::holds_alternative<Ihs>(method)) {
    if (up.size() != 3) fail(ErrorCode::BandCountMismatch, "IHS requires 3 bands");
    fused.assign(3, Plane(pan.width(), pan.height()));
    for (std::size_t i = 0; i < pan.size(); ++i) {
      const float intensity = (up[0].samples()[i] + up[1].samples()[i] + up[2].samples()[i]) / 3.0f;
      const float detail = pan.samples()[i] - intensity;
      for (int k = 0; k < 3; ++k) fused[k].samples()[i] = up[k].samples()[i] + detail;
    }
  } else {
    const auto kind = std::get<DwtReplace>(method).kind;
    for (const auto& m : up) fused.push_back(fuse_band_dwt(pan, m, kind));
  }
  return MultibandImage(std::move(fused));
}

}  // namespace wavefuse::reference
