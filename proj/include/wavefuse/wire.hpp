#pragma once

// Binary frame format spoken between master and workers. All integers are
// little-endian.
//
//   offset  size  field
//        0     4  magic "WFUS"
//        4     2  version (1)
//        6     2  msg_type
//        8     4  payload_len
//       12     n  payload
//
// TASK payload:   tile_row u16, tile_col u16, method u8, wavelet u8,
//                 wa_weight_milli u16, pan_w u32, pan_h u32, band_count u8,
//                 pan (pan_w*pan_h bytes), band_count MS planes.
//                 MS planes are (pan_w/2)*(pan_h/2) bytes for coefficient
//                 replacement and pan_w*pan_h bytes for WA/IHS (resampled
//                 on the master).
// RESULT payload: tile_row u16, tile_col u16, band_count u8, then
//                 band_count PAN-sized planes, 8-bit.
// RESULT_EXACT:   same header, planes as float32 little-endian.
// ERROR payload:  UTF-8 reason (an ErrorCode name).
// HELLO payload:  opaque, echoed back by the worker.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wavefuse/fusion.hpp"
#include "wavefuse/image.hpp"
#include "wavefuse/tiling.hpp"

namespace wavefuse::wire {

inline constexpr std::array<std::uint8_t, 4> kMagic = {'W', 'F', 'U', 'S'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 12;
inline constexpr std::uint32_t kMaxPayload = 256u << 20;

enum class MsgType : std::uint16_t {
  Hello = 1,
  Task = 2,
  Result = 3,
  Error = 4,
  Shutdown = 5,
  TaskExact = 6,  // TASK asking for a RESULT_EXACT reply
  ResultExact = 7,
};

struct Message {
  MsgType type = MsgType::Hello;
  std::vector<std::uint8_t> payload;
  bool operator==(const Message&) const = default;
};

struct FrameHeader {
  MsgType type;
  std::uint32_t payload_len;
};

std::vector<std::uint8_t> encode_message(const Message& m);

/// Decodes exactly one frame; trailing bytes are a MalformedPayload error.
Message decode_message(std::span<const std::uint8_t> bytes);

/// Validates the fixed 12-byte header, including the payload size cap.
FrameHeader decode_header(std::span<const std::uint8_t> bytes);

/// Pops one complete frame off the front of a stream buffer, if present.
std::optional<Message> extract_frame(std::vector<std::uint8_t>& buffer);

Message error_message(std::string_view reason);
std::string error_reason(const Message& m);

struct MethodCodes {
  std::uint8_t method = 0;   // 0 WA, 1 IHS, 2 DWT replace
  std::uint8_t wavelet = 0;  // 0 Haar, 1 Daubechies4
  std::uint16_t wa_weight_milli = 500;
  bool operator==(const MethodCodes&) const = default;
};

MethodCodes encode_method(const FusionMethod& method);
FusionMethod decode_method(const MethodCodes& codes);

struct TaskPayload {
  tiling::TileIndex index;
  MethodCodes method;
  std::uint32_t pan_w = 0;
  std::uint32_t pan_h = 0;
  std::vector<std::uint8_t> pan;
  std::vector<std::vector<std::uint8_t>> ms;

  bool operator==(const TaskPayload&) const = default;
};

std::vector<std::uint8_t> encode_task(const TaskPayload& task);
TaskPayload decode_task(std::span<const std::uint8_t> payload);

/// Snaps float tile data to 8 bits for a TASK.
TaskPayload make_task(tiling::TileIndex index, const FusionMethod& method, const Plane& pan,
                      const MultibandImage& ms);

/// Dequantized task inputs, ready for fusion.
struct TaskInputs {
  Plane pan;
  MultibandImage ms;
  FusionMethod method;
};
TaskInputs task_inputs(const TaskPayload& task);

struct ResultPayload {
  tiling::TileIndex index;
  MultibandImage bands;
};

/// `exact` selects float32 planes (RESULT_EXACT) instead of 8-bit.
std::vector<std::uint8_t> encode_result(const ResultPayload& result, bool exact);
ResultPayload decode_result(std::span<const std::uint8_t> payload, int width, int height,
                            bool exact);

}  // namespace wavefuse::wire
