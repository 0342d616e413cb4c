#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavefuse {

enum class ErrorCode {
  // imageio
  UnsupportedFormat,
  Truncated,
  MalformedHeader,
  ChannelOutOfRange,
  // wavelet
  OddLength,
  TooShort,
  OddDimension,
  TooSmall,
  // fusion / metrics / tiling
  DimensionMismatch,
  WeightOutOfRange,
  BandCountMismatch,
  NotDivisible,
  ZeroBandMean,
  TooFewBands,
  OddTile,
  MissingTile,
  // wire / cluster
  BadMagic,
  BadVersion,
  TruncatedFrame,
  UnknownType,
  PayloadTooLarge,
  MalformedPayload,
  JobFailed,
  NoWorkers,
  Interrupted,
  // plumbing
  Io,
  Network,
  InvalidArgument,
};

/// Stable name of an error code; also the reason string sent in ERROR frames.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail = {});

}  // namespace wavefuse
