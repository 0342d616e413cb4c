#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wavefuse/error.hpp"
#include "wavefuse/fusion.hpp"
#include "wavefuse/metrics.hpp"

using namespace wavefuse;
using namespace wavefuse::metrics;

namespace {

// Direct single-window Q with population moments; no factoring.
double q_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double va = 0, vb = 0, c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    c += (a[i] - ma) * (b[i] - mb);
  }
  va /= n;
  vb /= n;
  c /= n;
  return 4 * c * ma * mb / ((va + vb) * (ma * ma + mb * mb));
}

std::vector<double> window(const Plane& p, int x0, int y0, int w, int h) {
  std::vector<double> v;
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) v.push_back(p(x, y));
  }
  return v;
}

Plane row_plane(std::vector<float> v) {
  const int n = static_cast<int>(v.size());
  return Plane(n, 1, std::move(v));
}

// Pixel replication upsample; block mean of it gives back the input.
Plane replicate(const Plane& p, int f) {
  Plane out(p.width() * f, p.height() * f);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out(x, y) = p(x / f, y / f);
  }
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("degrade is a block mean") {
  const Plane p(2, 2, std::vector<float>{1, 3, 5, 7});
  CHECK(degrade(p, 1) == p);
  CHECK(degrade(p, 2) == Plane(1, 1, 4.0f));
  CHECK(degrade(Plane(12, 8, 9.0f), 4) == Plane(3, 2, 9.0f));
  CHECK(code_of([] { (void)degrade(Plane(6, 4), 4); }) == ErrorCode::NotDivisible);
}

TEST_CASE("Q index hand values") {
  const Plane a = row_plane({1, 2, 3, 4});
  const Plane b = row_plane({2, 4, 6, 8});
  CHECK(std::abs(q_index(a, b) - 0.64) <= 1e-9);
  CHECK(std::abs(q_oracle({1, 2, 3, 4}, {2, 4, 6, 8}) - 125.0 / 195.3125) <= 1e-12);
  CHECK(q_index(a, a) == 1.0);
  CHECK(q_index(Plane(4, 4, 3.0f), Plane(4, 4, 3.0f)) == 1.0);
  CHECK(q_index(Plane(4, 4, 3.0f), Plane(4, 4, 5.0f)) == 0.0);
  CHECK(code_of([&] { (void)q_index(a, Plane(2, 2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("Q index averages full 32x32 blocks against the direct formula") {
  std::mt19937 rng(21);
  for (const auto& [w, h] : {std::pair{64, 64}, {70, 40}, {96, 33}, {20, 50}}) {
    CAPTURE(w);
    CAPTURE(h);
    const Plane a = testing::random_plane(w, h, rng, 1.0f, 255.0f);
    Plane b = a;
    for (auto& v : b.samples())
      v = 0.7f * v + 20.0f + std::uniform_real_distribution<float>(-30, 30)(rng);
    double expect = 0.0;
    if (w < 32 || h < 32) {
      expect = q_oracle(window(a, 0, 0, w, h), window(b, 0, 0, w, h));
    } else {
      int n = 0;
      for (int y = 0; y + 32 <= h; y += 32) {
        for (int x = 0; x + 32 <= w; x += 32) {
          expect += q_oracle(window(a, x, y, 32, 32), window(b, x, y, 32, 32));
          ++n;
        }
      }
      expect /= n;
    }
    CHECK(std::abs(q_index(a, b) - expect) < 1e-9);
    CHECK(std::abs(q_index(a, b) - q_index(b, a)) < 1e-12);
    CHECK(q_index(a, b) <= 1.0);
    CHECK(std::abs(q_index(a, a) - 1.0) < 1e-12);
  }
}

TEST_CASE("ERGAS hand values") {
  std::mt19937 rng(3);
  const MultibandImage ms({testing::random_plane8(8, 8, rng), testing::random_plane8(8, 8, rng)});
  std::vector<Plane> up;
  for (const auto& b : ms.bands()) up.push_back(replicate(b, 2));
  CHECK(ergas(MultibandImage(up), ms, 2) == 0.0);
  CHECK(ergas_same_scale(ms, ms, 4) == 0.0);

  // Constant offset of 5 on a reference with mean 100, ratio 2.
  Plane ref(8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) ref(x, y) = (x + y) % 2 == 0 ? 90.0f : 110.0f;
  }
  Plane fused = replicate(ref, 2);
  for (auto& v : fused.samples()) v += 5.0f;
  CHECK(std::abs(ergas(MultibandImage({fused}), MultibandImage({ref}), 2) - 2.5) <= 1e-9);
  CHECK(std::abs(100.0 * 0.5 * (5.0 / 100.0) - 2.5) <= 1e-12);

  CHECK(code_of([] {
          (void)ergas_same_scale(MultibandImage({Plane(2, 2, 1.0f)}),
                                 MultibandImage({Plane(2, 2, 0.0f)}), 2);
        }) == ErrorCode::ZeroBandMean);
  CHECK(code_of([&] { (void)ergas(MultibandImage({fused}), MultibandImage({ref}), 3); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("spectral distortion") {
  std::mt19937 rng(4);
  const MultibandImage ms = testing::random_bands(16, 16, 3, rng);
  std::vector<Plane> up;
  for (const auto& b : ms.bands()) up.push_back(resample_bilinear(b, 32, 32));
  CHECK(d_lambda(MultibandImage(up), ms) == 0.0);

  // Two bands whose fused pair is identical (Q = 1) while the MS pair has
  // Q = 0.7, so the single pair differs by 0.3.
  const double m = (5.0 + std::sqrt(25.0 - 4 * 0.7 * 0.7 * 6.25)) / (2 * 0.7);
  const Plane a = row_plane({1, 2, 3, 4});
  const auto shift = static_cast<float>(m - 2.5);
  const Plane c = row_plane({1 + shift, 2 + shift, 3 + shift, 4 + shift});
  CHECK(std::abs(q_index(a, c) - 0.7) < 1e-6);
  CHECK(std::abs(d_lambda(MultibandImage({a, a}), MultibandImage({a, c})) - 0.3) < 1e-6);

  CHECK(code_of([&] { (void)d_lambda(MultibandImage({a}), MultibandImage({a})); }) ==
        ErrorCode::TooFewBands);
}

TEST_CASE("spatial distortion") {
  std::mt19937 rng(5);
  const Plane pan = testing::random_plane8(32, 32, rng);
  const Plane low = degrade(pan, 2);
  CHECK(d_s(MultibandImage({pan, pan}), MultibandImage({low, low}), pan) == 0.0);
}

TEST_CASE("QNR of a perfectly consistent scene is 1") {
  const Plane pan(8, 8, 120.0f);
  const MultibandImage ms({Plane(4, 4, 120.0f), Plane(4, 4, 120.0f), Plane(4, 4, 120.0f)});
  const MultibandImage fused({pan, pan, pan});
  const QualityReport r = qnr(fused, ms, pan);
  CHECK(r.qnr == 1.0);
  CHECK(r.ergas == 0.0);
  CHECK(r.q_per_band == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("QNR stays in [0,1] on random triples") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const MultibandImage fused = testing::random_bands(32, 32, 3, rng);
    const MultibandImage ms = testing::random_bands(16, 16, 3, rng);
    const Plane pan = testing::random_plane8(32, 32, rng);
    const QualityReport r = qnr(fused, ms, pan);
    REQUIRE(r.qnr >= 0.0);
    REQUIRE(r.qnr <= 1.0);
    REQUIRE(r.d_lambda >= 0.0);
    REQUIRE(r.d_lambda <= 1.0);
    REQUIRE(r.d_s >= 0.0);
    REQUIRE(r.d_s <= 1.0);
    REQUIRE(r.ergas >= 0.0);
    REQUIRE(std::abs(r.qnr - (1 - r.d_lambda) * (1 - r.d_s)) < 1e-15);
  }
}

TEST_CASE("resolution ratio") {
  CHECK(resolution_ratio(64, 32, 16, 8) == 4);
  CHECK(code_of([] { (void)resolution_ratio(64, 32, 16, 16); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { (void)resolution_ratio(64, 64, 0, 16); }) == ErrorCode::DimensionMismatch);
}
