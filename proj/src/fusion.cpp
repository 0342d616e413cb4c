#include "wavefuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wavefuse/error.hpp"

namespace wavefuse {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Taps {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<double> frac;
};

// Source taps for one axis. Must match reference::resample_bilinear exactly.
Taps axis_taps(int in, int out) {
  Taps taps;
  taps.lo.resize(out);
  taps.hi.resize(out);
  taps.frac.resize(out);
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
    const int lo = static_cast<int>(std::floor(src));
    taps.lo[i] = lo;
    taps.hi[i] = std::min(lo + 1, in - 1);
    taps.frac[i] = src - lo;
  }
  return taps;
}

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

std::string method_name(const FusionMethod& method) {
  return std::visit(overloaded{
                        [](const WeightedAverage&) { return std::string("wa"); },
                        [](const Ihs&) { return std::string("ihs"); },
                        [](const DwtReplace& d) {
                          return std::string(d.kind == WaveletKind::Haar ? "hdwt" : "ddwt");
                        },
                    },
                    method);
}

FusionMethod parse_method(std::string_view name, float weight) {
  if (name == "wa") return WeightedAverage{weight};
  if (name == "ihs") return Ihs{};
  if (name == "hdwt") return DwtReplace{WaveletKind::Haar};
  if (name == "ddwt") return DwtReplace{WaveletKind::Daubechies4};
  fail(ErrorCode::InvalidArgument, "unknown fusion method '" + std::string(name) + "'");
}

Size working_size(const FusionMethod& method, int pan_w, int pan_h) noexcept {
  if (std::holds_alternative<DwtReplace>(method)) return {pan_w / 2, pan_h / 2};
  return {pan_w, pan_h};
}

Plane resample_bilinear(const Plane& p, int out_w, int out_h, Exec exec) {
  if (out_w < 1 || out_h < 1)
    fail(ErrorCode::InvalidArgument, "resample target " + dims(out_w, out_h));
  if (p.width() == out_w && p.height() == out_h) return p;

  const Taps tx = axis_taps(p.width(), out_w);
  const Taps ty = axis_taps(p.height(), out_h);
  Plane out(out_w, out_h);
  const int threads = exec.resolved();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < out_h; ++y) {
    const auto r0 = p.row(ty.lo[y]);
    const auto r1 = p.row(ty.hi[y]);
    const double fy = ty.frac[y];
    auto dst = out.row(y);
    for (int x = 0; x < out_w; ++x) {
      const double top = std::lerp(double{r0[tx.lo[x]]}, double{r0[tx.hi[x]]}, tx.frac[x]);
      const double bottom = std::lerp(double{r1[tx.lo[x]]}, double{r1[tx.hi[x]]}, tx.frac[x]);
      dst[x] = static_cast<float>(std::lerp(top, bottom, fy));
    }
  }
  return out;
}

MultibandImage prepare_ms(const MultibandImage& ms, const FusionMethod& method, int pan_w,
                          int pan_h, Exec exec) {
  const Size target = working_size(method, pan_w, pan_h);
  std::vector<Plane> bands;
  bands.reserve(ms.band_count());
  for (const auto& band : ms.bands()) {
    bands.push_back(resample_bilinear(band, target.width, target.height, exec));
  }
  return MultibandImage(std::move(bands));
}

MultibandImage fuse_wa(const Plane& pan, const MultibandImage& ms, float weight, Exec exec) {
  if (!(weight >= 0.0f && weight <= 1.0f)) {
    fail(ErrorCode::WeightOutOfRange, "weight " + std::to_string(weight));
  }
  const int threads = exec.resolved();
  std::vector<Plane> fused;
  fused.reserve(ms.band_count());
  for (const auto& band : ms.bands()) {
    const Plane up = resample_bilinear(band, pan.width(), pan.height(), exec);
    Plane out(pan.width(), pan.height());
    const float* p = pan.samples().data();
    const float* m = up.samples().data();
    float* o = out.samples().data();
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) o[i] = weight * p[i] + (1.0f - weight) * m[i];
    fused.push_back(std::move(out));
  }
  return MultibandImage(std::move(fused));
}

MultibandImage fuse_ihs(const Plane& pan, const MultibandImage& ms, Exec exec) {
  if (ms.band_count() != 3) {
    fail(ErrorCode::BandCountMismatch,
         "IHS requires 3 bands, got " + std::to_string(ms.band_count()));
  }
  const MultibandImage up = prepare_ms(ms, Ihs{}, pan.width(), pan.height(), exec);
  std::vector<Plane> fused(3, Plane(pan.width(), pan.height()));
  const float* p = pan.samples().data();
  const float* r = up.band(0).samples().data();
  const float* g = up.band(1).samples().data();
  const float* b = up.band(2).samples().data();
  float* fr = fused[0].samples().data();
  float* fg = fused[1].samples().data();
  float* fb = fused[2].samples().data();
  const auto n = static_cast<std::ptrdiff_t>(pan.size());
  const int threads = exec.resolved();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const float intensity = (r[i] + g[i] + b[i]) / 3.0f;
    const float detail = p[i] - intensity;
    fr[i] = r[i] + detail;
    fg[i] = g[i] + detail;
    fb[i] = b[i] + detail;
  }
  return MultibandImage(std::move(fused));
}

Plane fuse_dwt(const Plane& pan, const Plane& ms_band, WaveletKind kind, Exec exec) {
  if (pan.width() % 2 != 0 || pan.height() % 2 != 0) {
    fail(ErrorCode::OddDimension, "PAN " + dims(pan.width(), pan.height()));
  }
  if (ms_band.width() * 2 != pan.width() || ms_band.height() * 2 != pan.height()) {
    fail(ErrorCode::DimensionMismatch, "MS band " + dims(ms_band.width(), ms_band.height()) +
                                           " is not half of PAN " +
                                           dims(pan.width(), pan.height()));
  }
  Plane coeffs = dwt2d_forward(pan, kind, exec);
  const auto gain = static_cast<float>(ll_gain(kind));
  for (int y = 0; y < ms_band.height(); ++y) {
    const auto src = ms_band.row(y);
    auto dst = coeffs.row(y);
    for (int x = 0; x < ms_band.width(); ++x) dst[x] = src[x] * gain;
  }
  return dwt2d_inverse(coeffs, kind, exec);
}

MultibandImage fuse(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                    Exec exec) {
  if (pan.width() < ms.width() || pan.height() < ms.height()) {
    fail(ErrorCode::DimensionMismatch, "MS " + dims(ms.width(), ms.height()) +
                                           " is larger than PAN " +
                                           dims(pan.width(), pan.height()));
  }
  return std::visit(
      overloaded{
          [&](const WeightedAverage& wa) { return fuse_wa(pan, ms, wa.weight, exec); },
          [&](const Ihs&) { return fuse_ihs(pan, ms, exec); },
          [&](const DwtReplace& dwt) {
            if (pan.width() % 2 != 0 || pan.height() % 2 != 0) {
              fail(ErrorCode::OddDimension, "PAN " + dims(pan.width(), pan.height()));
            }
            const MultibandImage half = prepare_ms(ms, method, pan.width(), pan.height(), exec);
            std::vector<Plane> fused;
            fused.reserve(half.band_count());
            for (const auto& band : half.bands())
              fused.push_back(fuse_dwt(pan, band, dwt.kind, exec));
            return MultibandImage(std::move(fused));
          },
      },
      method);
}

}  // namespace wavefuse
