#include "wavefuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavefuse/error.hpp"
#include "wavefuse/fusion.hpp"

namespace wavefuse::metrics {

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

// Q over the rectangle [x0, x0+w) x [y0, y0+h).
double block_q(const Plane& a, const Plane& b, int x0, int y0, int w, int h) {
  const double n = static_cast<double>(w) * h;
  double sum_a = 0.0, sum_b = 0.0;
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      sum_a += a(x, y);
      sum_b += b(x, y);
    }
  }
  const double mu_a = sum_a / n;
  const double mu_b = sum_b / n;
  double var_a = 0.0, var_b = 0.0, cov = 0.0;
  bool identical = true;
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      const double da = a(x, y) - mu_a;
      const double db = b(x, y) - mu_b;
      var_a += da * da;
      var_b += db * db;
      cov += da * db;
      identical = identical && a(x, y) == b(x, y);
    }
  }
  var_a /= n;
  var_b /= n;
  cov /= n;

  // Q = 4 cov mu_a mu_b / ((var_a + var_b)(mu_a^2 + mu_b^2)), evaluated as
  // the product of its contrast/structure and luminance factors.
  const double contrast_den = var_a + var_b;
  const double luminance_den = mu_a * mu_a + mu_b * mu_b;
  if (contrast_den == 0.0 || luminance_den == 0.0) return identical ? 1.0 : 0.0;
  return (2.0 * cov / contrast_den) * (2.0 * mu_a * mu_b / luminance_den);
}

void require_same_bands(const MultibandImage& a, const MultibandImage& b) {
  if (a.band_count() != b.band_count()) {
    fail(ErrorCode::DimensionMismatch, "band counts differ: " + std::to_string(a.band_count()) +
                                           " vs " + std::to_string(b.band_count()));
  }
}

MultibandImage upsample(const MultibandImage& ms, int w, int h) {
  std::vector<Plane> bands;
  for (const auto& b : ms.bands()) bands.push_back(resample_bilinear(b, w, h, Exec::serial()));
  return MultibandImage(std::move(bands));
}

}  // namespace

Plane degrade(const Plane& p, int factor) {
  if (factor < 1) fail(ErrorCode::InvalidArgument, "degrade factor must be >= 1");
  if (p.width() % factor != 0 || p.height() % factor != 0) {
    fail(ErrorCode::NotDivisible,
         dims(p.width(), p.height()) + " by factor " + std::to_string(factor));
  }
  if (factor == 1) return p;
  const int ow = p.width() / factor;
  const int oh = p.height() / factor;
  const double area = static_cast<double>(factor) * factor;
  Plane out(ow, oh);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      double sum = 0.0;
      for (int y = oy * factor; y < (oy + 1) * factor; ++y) {
        for (int x = ox * factor; x < (ox + 1) * factor; ++x) sum += p(x, y);
      }
      out(ox, oy) = static_cast<float>(sum / area);
    }
  }
  return out;
}

double q_index(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) {
    fail(ErrorCode::DimensionMismatch,
         dims(a.width(), a.height()) + " vs " + dims(b.width(), b.height()));
  }
  if (a.width() < kQBlock || a.height() < kQBlock) {
    return block_q(a, b, 0, 0, a.width(), a.height());
  }
  // Full blocks only; a remainder narrower than one block is not scored.
  double total = 0.0;
  int count = 0;
  for (int y = 0; y + kQBlock <= a.height(); y += kQBlock) {
    for (int x = 0; x + kQBlock <= a.width(); x += kQBlock) {
      total += block_q(a, b, x, y, kQBlock, kQBlock);
      ++count;
    }
  }
  return total / count;
}

double ergas_same_scale(const MultibandImage& estimate, const MultibandImage& reference,
                        double ratio) {
  require_same_bands(estimate, reference);
  if (estimate.width() != reference.width() || estimate.height() != reference.height()) {
    fail(ErrorCode::DimensionMismatch, "ERGAS operands must share dimensions");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < reference.band_count(); ++k) {
    const auto est = estimate.band(k).samples();
    const auto ref = reference.band(k).samples();
    double sum_ref = 0.0, sq_err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      sum_ref += ref[i];
      const double e = static_cast<double>(est[i]) - ref[i];
      sq_err += e * e;
    }
    const double n = static_cast<double>(ref.size());
    const double mu = sum_ref / n;
    if (mu == 0.0) fail(ErrorCode::ZeroBandMean, "reference band " + std::to_string(k));
    acc += (sq_err / n) / (mu * mu);
  }
  return 100.0 / ratio * std::sqrt(acc / static_cast<double>(reference.band_count()));
}

double ergas(const MultibandImage& fused, const MultibandImage& ms_ref, int ratio) {
  if (ratio < 1 || fused.width() != ms_ref.width() * ratio ||
      fused.height() != ms_ref.height() * ratio) {
    fail(ErrorCode::DimensionMismatch, "fused " + dims(fused.width(), fused.height()) +
                                           " is not MS " + dims(ms_ref.width(), ms_ref.height()) +
                                           " times " + std::to_string(ratio));
  }
  require_same_bands(fused, ms_ref);
  std::vector<Plane> degraded;
  for (const auto& b : fused.bands()) degraded.push_back(degrade(b, ratio));
  return ergas_same_scale(MultibandImage(std::move(degraded)), ms_ref, ratio);
}

double d_lambda(const MultibandImage& fused, const MultibandImage& ms) {
  require_same_bands(fused, ms);
  const std::size_t n = fused.band_count();
  if (n < 2) fail(ErrorCode::TooFewBands, "spectral distortion needs at least 2 bands");
  const MultibandImage up = upsample(ms, fused.width(), fused.height());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double diff =
          std::abs(q_index(fused.band(k), fused.band(l)) - q_index(up.band(k), up.band(l)));
      sum += 2.0 * diff;  // (k,l) and (l,k)
    }
  }
  return std::clamp(sum / static_cast<double>(n * (n - 1)), 0.0, 1.0);
}

double d_s(const MultibandImage& fused, const MultibandImage& ms, const Plane& pan) {
  require_same_bands(fused, ms);
  if (fused.width() != pan.width() || fused.height() != pan.height()) {
    fail(ErrorCode::DimensionMismatch, "fused and PAN dimensions differ");
  }
  const int ratio = resolution_ratio(pan.width(), pan.height(), ms.width(), ms.height());
  const Plane pan_low = degrade(pan, ratio);
  double sum = 0.0;
  for (std::size_t k = 0; k < fused.band_count(); ++k) {
    sum += std::abs(q_index(fused.band(k), pan) - q_index(ms.band(k), pan_low));
  }
  return std::clamp(sum / static_cast<double>(fused.band_count()), 0.0, 1.0);
}

QualityReport qnr(const MultibandImage& fused, const MultibandImage& ms, const Plane& pan) {
  require_same_bands(fused, ms);
  const int ratio = resolution_ratio(fused.width(), fused.height(), ms.width(), ms.height());
  QualityReport report;
  report.ergas = ergas(fused, ms, ratio);
  const MultibandImage up = upsample(ms, fused.width(), fused.height());
  for (std::size_t k = 0; k < fused.band_count(); ++k) {
    report.q_per_band.push_back(q_index(fused.band(k), up.band(k)));
  }
  report.d_lambda = d_lambda(fused, ms);
  report.d_s = d_s(fused, ms, pan);
  report.qnr = (1.0 - report.d_lambda) * (1.0 - report.d_s);
  return report;
}

int resolution_ratio(int hi_w, int hi_h, int lo_w, int lo_h) {
  if (lo_w <= 0 || lo_h <= 0 || hi_w % lo_w != 0 || hi_h % lo_h != 0 ||
      hi_w / lo_w != hi_h / lo_h) {
    fail(ErrorCode::DimensionMismatch,
         dims(hi_w, hi_h) + " is not an integer multiple of " + dims(lo_w, lo_h));
  }
  return hi_w / lo_w;
}

}  // namespace wavefuse::metrics
