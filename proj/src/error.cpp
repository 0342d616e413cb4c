#include "wavefuse/error.hpp"

namespace wavefuse {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat:
      return "UnsupportedFormat";
    case ErrorCode::Truncated:
      return "Truncated";
    case ErrorCode::MalformedHeader:
      return "MalformedHeader";
    case ErrorCode::ChannelOutOfRange:
      return "ChannelOutOfRange";
    case ErrorCode::OddLength:
      return "OddLength";
    case ErrorCode::TooShort:
      return "TooShort";
    case ErrorCode::OddDimension:
      return "OddDimension";
    case ErrorCode::TooSmall:
      return "TooSmall";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::WeightOutOfRange:
      return "WeightOutOfRange";
    case ErrorCode::BandCountMismatch:
      return "BandCountMismatch";
    case ErrorCode::NotDivisible:
      return "NotDivisible";
    case ErrorCode::ZeroBandMean:
      return "ZeroBandMean";
    case ErrorCode::TooFewBands:
      return "TooFewBands";
    case ErrorCode::OddTile:
      return "OddTile";
    case ErrorCode::MissingTile:
      return "MissingTile";
    case ErrorCode::BadMagic:
      return "BadMagic";
    case ErrorCode::BadVersion:
      return "BadVersion";
    case ErrorCode::TruncatedFrame:
      return "TruncatedFrame";
    case ErrorCode::UnknownType:
      return "UnknownType";
    case ErrorCode::PayloadTooLarge:
      return "PayloadTooLarge";
    case ErrorCode::MalformedPayload:
      return "MalformedPayload";
    case ErrorCode::JobFailed:
      return "JobFailed";
    case ErrorCode::NoWorkers:
      return "NoWorkers";
    case ErrorCode::Interrupted:
      return "Interrupted";
    case ErrorCode::Io:
      return "Io";
    case ErrorCode::Network:
      return "Network";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

namespace {
std::string format_message(ErrorCode code, const std::string& detail) {
  std::string msg(error_name(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(format_message(code, detail)), code_(code), detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace wavefuse
