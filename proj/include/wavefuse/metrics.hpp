#pragma once

#include <vector>

#include "wavefuse/image.hpp"

namespace wavefuse::metrics {

struct QualityReport {
  double ergas = 0.0;
  std::vector<double> q_per_band;
  double d_lambda = 0.0;
  double d_s = 0.0;
  double qnr = 0.0;
};

inline constexpr int kQBlock = 32;

/// Block-mean downsampling by an integer factor.
Plane degrade(const Plane& p, int factor);

/// Universal image quality index, averaged over non-overlapping 32x32 blocks
/// (the whole image when either side is shorter than 32). Population moments.
/// A block whose denominator vanishes scores 1 if both blocks are identical,
/// otherwise 0.
double q_index(const Plane& a, const Plane& b);

/// ERGAS between `estimate` and a same-size `reference`, for a PAN/MS
/// resolution ratio `ratio`:  100/ratio * sqrt(mean_k RMSE_k^2 / mu_k^2).
double ergas_same_scale(const MultibandImage& estimate, const MultibandImage& reference,
                        double ratio);

/// Wald consistency ERGAS: `fused` is block-mean degraded by `ratio` and
/// compared with `ms_ref`.
double ergas(const MultibandImage& fused, const MultibandImage& ms_ref, int ratio);

/// Spectral distortion: mean absolute change of inter-band Q over all
/// ordered band pairs, MS upsampled bilinearly to the fused size. Clamped to
/// [0,1].
double d_lambda(const MultibandImage& fused, const MultibandImage& ms);

/// Spatial distortion: mean over bands of |Q(fused_k, pan) - Q(ms_k, pan
/// degraded to MS size)|. Clamped to [0,1].
double d_s(const MultibandImage& fused, const MultibandImage& ms, const Plane& pan);

/// Full report; the resolution ratio is the PAN/MS dimension quotient.
QualityReport qnr(const MultibandImage& fused, const MultibandImage& ms, const Plane& pan);

/// Integer ratio between a high- and low-resolution shape, identical on both
/// axes; DimensionMismatch otherwise.
int resolution_ratio(int hi_w, int hi_h, int lo_w, int lo_h);

}  // namespace wavefuse::metrics
