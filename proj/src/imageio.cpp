#include "wavefuse/imageio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "wavefuse/error.hpp"

namespace wavefuse::imageio {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and comments, then parses a decimal integer.
  long long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail(ErrorCode::MalformedHeader, "header ends early");
    if (!is_digit(bytes_[pos_])) fail(ErrorCode::MalformedHeader, "expected a decimal number");
    long long value = 0;
    while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        fail(ErrorCode::MalformedHeader, "header number out of range");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the payload.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      fail(ErrorCode::MalformedHeader, "missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  static bool is_digit(std::uint8_t c) noexcept { return c >= '0' && c <= '9'; }
  static bool is_space(std::uint8_t c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Raster8 read_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    fail(ErrorCode::UnsupportedFormat, "expected binary PGM (P5) or PPM (P6)");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;

  HeaderReader header(bytes);
  const auto width = header.next_int();
  const auto height = header.next_int();
  const auto maxval = header.next_int();
  if (width <= 0 || height <= 0) fail(ErrorCode::MalformedHeader, "zero image dimension");
  if (maxval != 255) {
    fail(ErrorCode::UnsupportedFormat,
         "maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  header.expect_single_space();

  const auto payload =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  const auto available = bytes.size() - header.position();
  if (available < payload) {
    fail(ErrorCode::Truncated,
         "payload has " + std::to_string(available) + " of " + std::to_string(payload) + " bytes");
  }
  const auto* first = bytes.data() + header.position();
  return Raster8(static_cast<int>(width), static_cast<int>(height), channels,
                 std::vector<std::uint8_t>(first, first + payload));
}

std::vector<std::uint8_t> write_pnm(const Raster8& raster) {
  const std::string header = (raster.channels() == 1 ? "P5\n" : "P6\n") +
                             std::to_string(raster.width()) + " " +
                             std::to_string(raster.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.samples().begin(), raster.samples().end());
  return out;
}

Raster8 load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::Io, "read failed for " + path.string());
  return read_pnm(bytes);
}

void save_pnm(const std::filesystem::path& path, const Raster8& raster) {
  const auto bytes = write_pnm(raster);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

Plane to_plane(const Raster8& raster, int channel) {
  if (channel < 0 || channel >= raster.channels()) {
    fail(ErrorCode::ChannelOutOfRange,
         "channel " + std::to_string(channel) + " of " + std::to_string(raster.channels()));
  }
  Plane plane(raster.width(), raster.height());
  const auto src = raster.samples();
  auto dst = plane.samples();
  const auto stride = static_cast<std::size_t>(raster.channels());
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = static_cast<float>(src[i * stride + channel]);
  return plane;
}

std::uint8_t quantize_sample(float v) noexcept {
  // NaN falls through both comparisons to 0; Plane forbids it anyway.
  const float clamped = v > 255.0f ? 255.0f : (v >= 0.0f ? v : 0.0f);
  // std::round is half-away-from-zero.
  return static_cast<std::uint8_t>(std::round(clamped));
}

Raster8 quantize(const Plane& plane) {
  Raster8 out(plane.width(), plane.height(), 1);
  std::transform(plane.samples().begin(), plane.samples().end(), out.samples().begin(),
                 quantize_sample);
  return out;
}

Raster8 quantize_rgb(const Plane& r, const Plane& g, const Plane& b) {
  if (!r.same_shape(g) || !r.same_shape(b)) {
    fail(ErrorCode::DimensionMismatch, "RGB planes must share dimensions");
  }
  Raster8 out(r.width(), r.height(), 3);
  auto dst = out.samples();
  for (std::size_t i = 0; i < r.size(); ++i) {
    dst[3 * i] = quantize_sample(r.samples()[i]);
    dst[3 * i + 1] = quantize_sample(g.samples()[i]);
    dst[3 * i + 2] = quantize_sample(b.samples()[i]);
  }
  return out;
}

Plane quantize_roundtrip(const Plane& plane) {
  Plane out(plane.width(), plane.height());
  std::transform(plane.samples().begin(), plane.samples().end(), out.samples().begin(),
                 [](float v) { return static_cast<float>(quantize_sample(v)); });
  return out;
}

MultibandImage quantize_roundtrip(const MultibandImage& image) {
  std::vector<Plane> bands;
  bands.reserve(image.band_count());
  for (const auto& b : image.bands()) bands.push_back(quantize_roundtrip(b));
  return MultibandImage(std::move(bands));
}

}  // namespace wavefuse::imageio
