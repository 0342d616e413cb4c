#include "wavefuse/wire.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "wavefuse/error.hpp"
#include "wavefuse/imageio.hpp"

namespace wavefuse::wire {

namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) {
    if (!b.empty()) out_.insert(out_.end(), b.begin(), b.end());
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, ErrorCode short_error)
      : in_(in), short_error_(short_error) {}
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    const auto b = take(2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32() {
    const auto b = take(4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (in_.size() - pos_ < n) fail(short_error_, "need " + std::to_string(n) + " more bytes");
    const auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  ErrorCode short_error_;
  std::size_t pos_ = 0;
};

bool known_type(std::uint16_t t) noexcept { return t >= 1 && t <= 7; }

std::uint64_t ms_plane_bytes(const MethodCodes& codes, std::uint32_t pan_w, std::uint32_t pan_h) {
  if (codes.method == 2) return std::uint64_t{pan_w / 2} * (pan_h / 2);
  return std::uint64_t{pan_w} * pan_h;
}

}  // namespace

std::vector<std::uint8_t> encode_message(const Message& m) {
  if (m.payload.size() > kMaxPayload)
    fail(ErrorCode::PayloadTooLarge, "frame payload over 256 MiB");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + m.payload.size());
  Writer w(out);
  for (const std::uint8_t b : kMagic) w.u8(b);
  w.u16(kVersion);
  w.u16(static_cast<std::uint16_t>(m.type));
  w.u32(static_cast<std::uint32_t>(m.payload.size()));
  out.resize(kHeaderSize + m.payload.size());
  if (!m.payload.empty()) std::memcpy(out.data() + kHeaderSize, m.payload.data(), m.payload.size());
  return out;
}

FrameHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) fail(ErrorCode::TruncatedFrame, "short frame header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) fail(ErrorCode::BadMagic);
  Reader r(bytes.subspan(4, kHeaderSize - 4), ErrorCode::TruncatedFrame);
  const auto version = r.u16();
  if (version != kVersion) fail(ErrorCode::BadVersion, "version " + std::to_string(version));
  const auto type = r.u16();
  if (!known_type(type)) fail(ErrorCode::UnknownType, "msg_type " + std::to_string(type));
  const auto len = r.u32();
  if (len > kMaxPayload) fail(ErrorCode::PayloadTooLarge, "payload_len " + std::to_string(len));
  return {static_cast<MsgType>(type), len};
}

Message decode_message(std::span<const std::uint8_t> bytes) {
  const FrameHeader header = decode_header(bytes);
  const auto body = bytes.subspan(kHeaderSize);
  if (body.size() < header.payload_len)
    fail(ErrorCode::TruncatedFrame, "payload shorter than declared");
  if (body.size() > header.payload_len)
    fail(ErrorCode::MalformedPayload, "trailing bytes after frame");
  return Message{header.type, {body.begin(), body.end()}};
}

std::optional<Message> extract_frame(std::vector<std::uint8_t>& buffer) {
  if (buffer.size() < kHeaderSize) return std::nullopt;
  const FrameHeader header = decode_header(buffer);
  const std::size_t total = kHeaderSize + header.payload_len;
  if (buffer.size() < total) return std::nullopt;
  Message m{header.type,
            {buffer.begin() + kHeaderSize, buffer.begin() + static_cast<std::ptrdiff_t>(total)}};
  buffer.erase(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(total));
  return m;
}

Message error_message(std::string_view reason) {
  return Message{MsgType::Error, {reason.begin(), reason.end()}};
}

std::string error_reason(const Message& m) { return {m.payload.begin(), m.payload.end()}; }

MethodCodes encode_method(const FusionMethod& method) {
  MethodCodes codes;
  if (const auto* wa = std::get_if<WeightedAverage>(&method)) {
    codes.method = 0;
    codes.wa_weight_milli =
        static_cast<std::uint16_t>(std::lround(std::clamp(wa->weight, 0.0f, 1.0f) * 1000.0f));
  } else if (std::holds_alternative<Ihs>(method)) {
    codes.method = 1;
  } else {
    codes.method = 2;
    codes.wavelet = std::get<DwtReplace>(method).kind == WaveletKind::Haar ? 0 : 1;
  }
  return codes;
}

FusionMethod decode_method(const MethodCodes& codes) {
  switch (codes.method) {
    case 0:
      if (codes.wa_weight_milli > 1000) {
        fail(ErrorCode::WeightOutOfRange, std::to_string(codes.wa_weight_milli) + " per mille");
      }
      return WeightedAverage{static_cast<float>(codes.wa_weight_milli) / 1000.0f};
    case 1:
      return Ihs{};
    case 2:
      if (codes.wavelet > 1) fail(ErrorCode::MalformedPayload, "unknown wavelet code");
      return DwtReplace{codes.wavelet == 0 ? WaveletKind::Haar : WaveletKind::Daubechies4};
    default:
      fail(ErrorCode::MalformedPayload, "unknown method code " + std::to_string(codes.method));
  }
}

std::vector<std::uint8_t> encode_task(const TaskPayload& task) {
  std::vector<std::uint8_t> out;
  Writer w(out);
  w.u16(static_cast<std::uint16_t>(task.index.row));
  w.u16(static_cast<std::uint16_t>(task.index.col));
  w.u8(task.method.method);
  w.u8(task.method.wavelet);
  w.u16(task.method.wa_weight_milli);
  w.u32(task.pan_w);
  w.u32(task.pan_h);
  w.u8(static_cast<std::uint8_t>(task.ms.size()));
  w.bytes(task.pan);
  for (const auto& band : task.ms) w.bytes(band);
  return out;
}

TaskPayload decode_task(std::span<const std::uint8_t> payload) {
  Reader r(payload, ErrorCode::MalformedPayload);
  TaskPayload task;
  task.index.row = r.u16();
  task.index.col = r.u16();
  task.method.method = r.u8();
  task.method.wavelet = r.u8();
  task.method.wa_weight_milli = r.u16();
  task.pan_w = r.u32();
  task.pan_h = r.u32();
  const auto bands = r.u8();
  if (task.pan_w == 0 || task.pan_h == 0) fail(ErrorCode::MalformedPayload, "empty tile");
  if (task.pan_w % 2 != 0 || task.pan_h % 2 != 0) {
    fail(ErrorCode::OddDimension,
         "tile " + std::to_string(task.pan_w) + "x" + std::to_string(task.pan_h));
  }
  if (bands == 0) fail(ErrorCode::MalformedPayload, "band_count 0");
  (void)decode_method(task.method);

  const std::uint64_t pan_bytes = std::uint64_t{task.pan_w} * task.pan_h;
  const std::uint64_t ms_bytes = ms_plane_bytes(task.method, task.pan_w, task.pan_h);
  if (r.remaining() != pan_bytes + bands * ms_bytes) {
    fail(ErrorCode::MalformedPayload, "payload byte count does not match declared dimensions");
  }
  const auto pan = r.take(pan_bytes);
  task.pan.assign(pan.begin(), pan.end());
  for (int k = 0; k < bands; ++k) {
    const auto band = r.take(ms_bytes);
    task.ms.emplace_back(band.begin(), band.end());
  }
  return task;
}

TaskPayload make_task(tiling::TileIndex index, const FusionMethod& method, const Plane& pan,
                      const MultibandImage& ms) {
  TaskPayload task;
  task.index = index;
  task.method = encode_method(method);
  task.pan_w = static_cast<std::uint32_t>(pan.width());
  task.pan_h = static_cast<std::uint32_t>(pan.height());
  const auto pan8 = imageio::quantize(pan);
  task.pan.assign(pan8.samples().begin(), pan8.samples().end());
  for (const auto& band : ms.bands()) {
    const auto b8 = imageio::quantize(band);
    task.ms.emplace_back(b8.samples().begin(), b8.samples().end());
  }
  return task;
}

TaskInputs task_inputs(const TaskPayload& task) {
  const auto lift = [](const std::vector<std::uint8_t>& bytes, int w, int h) {
    return Plane(w, h, std::vector<float>(bytes.begin(), bytes.end()));
  };
  const int w = static_cast<int>(task.pan_w);
  const int h = static_cast<int>(task.pan_h);
  const FusionMethod method = decode_method(task.method);
  const Size ms_size = working_size(method, w, h);
  std::vector<Plane> bands;
  for (const auto& b : task.ms) bands.push_back(lift(b, ms_size.width, ms_size.height));
  return TaskInputs{lift(task.pan, w, h), MultibandImage(std::move(bands)), method};
}

std::vector<std::uint8_t> encode_result(const ResultPayload& result, bool exact) {
  std::vector<std::uint8_t> out;
  Writer w(out);
  w.u16(static_cast<std::uint16_t>(result.index.row));
  w.u16(static_cast<std::uint16_t>(result.index.col));
  w.u8(static_cast<std::uint8_t>(result.bands.band_count()));
  for (const auto& band : result.bands.bands()) {
    if (exact) {
      for (float v : band.samples()) w.f32(v);
    } else {
      for (float v : band.samples()) w.u8(imageio::quantize_sample(v));
    }
  }
  return out;
}

ResultPayload decode_result(std::span<const std::uint8_t> payload, int width, int height,
                            bool exact) {
  Reader r(payload, ErrorCode::MalformedPayload);
  ResultPayload result;
  result.index.row = r.u16();
  result.index.col = r.u16();
  const auto bands = r.u8();
  const std::uint64_t samples = std::uint64_t(width) * std::uint64_t(height);
  if (bands == 0 || r.remaining() != bands * samples * (exact ? 4u : 1u)) {
    fail(ErrorCode::MalformedPayload, "result byte count does not match the tile");
  }
  std::vector<Plane> planes;
  for (int k = 0; k < bands; ++k) {
    Plane p(width, height);
    for (auto& v : p.samples()) v = exact ? r.f32() : static_cast<float>(r.u8());
    planes.push_back(std::move(p));
  }
  result.bands = MultibandImage(std::move(planes));
  return result;
}

}  // namespace wavefuse::wire
