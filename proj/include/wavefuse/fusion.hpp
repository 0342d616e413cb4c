#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "wavefuse/image.hpp"
#include "wavefuse/wavelet.hpp"

namespace wavefuse {

struct WeightedAverage {
  float weight = 0.5f;
};
struct Ihs {};
struct DwtReplace {
  WaveletKind kind = WaveletKind::Haar;
};

using FusionMethod = std::variant<WeightedAverage, Ihs, DwtReplace>;

/// CLI spelling: wa, ihs, hdwt, ddwt.
std::string method_name(const FusionMethod& method);
FusionMethod parse_method(std::string_view name, float weight = 0.5f);

struct Size {
  int width = 0;
  int height = 0;
  bool operator==(const Size&) const = default;
};

/// Resolution the MS bands must have before a method consumes them: PAN size
/// for WA and IHS, half the PAN size for coefficient replacement.
Size working_size(const FusionMethod& method, int pan_w, int pan_h) noexcept;

/// Bilinear interpolation with pixel-center alignment; source coordinates
/// are clamped to the source extent.
Plane resample_bilinear(const Plane& p, int out_w, int out_h, Exec exec = {});

/// Resamples every band to `working_size`; bands already there are copied.
MultibandImage prepare_ms(const MultibandImage& ms, const FusionMethod& method, int pan_w,
                          int pan_h, Exec exec = {});

/// fused_k = weight * pan + (1 - weight) * upsample(ms_k)
MultibandImage fuse_wa(const Plane& pan, const MultibandImage& ms, float weight, Exec exec = {});

/// Fast additive IHS: fused_k = upsample(ms_k) + (pan - mean of the three
/// upsampled bands).
MultibandImage fuse_ihs(const Plane& pan, const MultibandImage& ms, Exec exec = {});

/// Coefficient replacement for one band: forward 2D DWT of PAN, overwrite the
/// LL quadrant with ms_band scaled by the transform's LL gain, inverse 2D DWT.
/// ms_band must be exactly half the PAN size.
Plane fuse_dwt(const Plane& pan, const Plane& ms_band, WaveletKind kind, Exec exec = {});

/// Dispatcher: resamples MS to the method's working size, then fuses every
/// band. Output has the PAN dimensions and the MS band count.
MultibandImage fuse(const Plane& pan, const MultibandImage& ms, const FusionMethod& method,
                    Exec exec = {});

}  // namespace wavefuse
