#pragma once

#include <cstdint>

#include "wavefuse/image.hpp"

namespace wavefuse::app {

/// Spectrally correlated multiband scene: smooth per-band radiometry plus a
/// shared high-frequency structure field. Values stay inside 0..255.
MultibandImage synth_reference(int width, int height, int bands, std::uint32_t seed);

/// PAN as the mean of the reference bands.
Plane synth_pan(const MultibandImage& reference);

/// Inputs for fusion at the given PAN size: the PAN and MS bands at half
/// resolution (block mean when the size is even, bilinear otherwise).
struct Scene {
  Plane pan;
  MultibandImage ms;
};
Scene synth_scene(int pan_w, int pan_h, int bands, std::uint32_t seed);

/// Reduced-resolution evaluation scene: a reference of size x size is turned
/// into PAN inputs at size/2 and MS inputs at size/4; `truth` is the
/// reference at size/2, what an ideal fusion would return.
struct WaldScene {
  Plane pan;
  MultibandImage ms;
  MultibandImage truth;
};
WaldScene synth_wald_scene(int size, std::uint32_t seed);

}  // namespace wavefuse::app
