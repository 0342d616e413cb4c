#include "wavefuse/app/scene.hpp"

#include <algorithm>
#include <random>

#include "wavefuse/fusion.hpp"
#include "wavefuse/metrics.hpp"

namespace wavefuse::app {

namespace {

Plane random_plane(int w, int h, std::mt19937& rng, float lo, float hi) {
  std::uniform_real_distribution<float> dist(lo, hi);
  Plane p(w, h);
  for (auto& v : p.samples()) v = dist(rng);
  return p;
}

// Value noise: coarse random lattice, bilinearly upsampled.
Plane smooth_field(int w, int h, int cell, std::mt19937& rng) {
  const Plane coarse = random_plane(std::max(2, w / cell), std::max(2, h / cell), rng, -1.0f, 1.0f);
  return resample_bilinear(coarse, w, h, Exec::serial());
}

Plane half_size(const Plane& p) {
  if (p.width() % 2 == 0 && p.height() % 2 == 0) return metrics::degrade(p, 2);
  return resample_bilinear(p, std::max(1, p.width() / 2), std::max(1, p.height() / 2),
                           Exec::serial());
}

}  // namespace

MultibandImage synth_reference(int width, int height, int bands, std::uint32_t seed) {
  std::mt19937 rng(seed);
  // Shared spatial structure: sharp-edged parcels plus fine texture.
  const Plane parcels = smooth_field(width, height, 12, rng);
  const Plane texture = random_plane(width, height, rng, -1.0f, 1.0f);
  std::uniform_real_distribution<float> base_dist(70.0f, 140.0f);

  std::vector<Plane> out;
  for (int k = 0; k < bands; ++k) {
    const Plane tone = smooth_field(width, height, 96, rng);
    const float base = base_dist(rng);
    const float edge_gain = 18.0f + 6.0f * k;
    Plane band(width, height);
    for (std::size_t i = 0; i < band.size(); ++i) {
      const float edge = parcels.samples()[i] > 0.0f ? 1.0f : -1.0f;
      const float v =
          base + 45.0f * tone.samples()[i] + edge_gain * edge + 6.0f * texture.samples()[i];
      band.samples()[i] = std::clamp(v, 0.0f, 255.0f);
    }
    out.push_back(std::move(band));
  }
  return MultibandImage(std::move(out));
}

Plane synth_pan(const MultibandImage& reference) {
  Plane pan(reference.width(), reference.height());
  const float n = static_cast<float>(reference.band_count());
  for (std::size_t i = 0; i < pan.size(); ++i) {
    float sum = 0.0f;
    for (const auto& b : reference.bands()) sum += b.samples()[i];
    pan.samples()[i] = sum / n;
  }
  return pan;
}

Scene synth_scene(int pan_w, int pan_h, int bands, std::uint32_t seed) {
  const MultibandImage reference = synth_reference(pan_w, pan_h, bands, seed);
  std::vector<Plane> ms;
  for (const auto& b : reference.bands()) ms.push_back(half_size(b));
  return Scene{synth_pan(reference), MultibandImage(std::move(ms))};
}

WaldScene synth_wald_scene(int size, std::uint32_t seed) {
  const MultibandImage reference = synth_reference(size, size, 3, seed);
  const Plane pan_full = synth_pan(reference);
  std::vector<Plane> ms, truth;
  for (const auto& b : reference.bands()) {
    ms.push_back(metrics::degrade(b, 4));
    truth.push_back(metrics::degrade(b, 2));
  }
  return WaldScene{metrics::degrade(pan_full, 2), MultibandImage(std::move(ms)),
                   MultibandImage(std::move(truth))};
}

}  // namespace wavefuse::app
