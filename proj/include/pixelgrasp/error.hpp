#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pixelgrasp {

enum class ErrorCode {
  // data_ingest
  MissingHeaderField,
  PointCountMismatch,
  MalformedLine,
  TruncatedGroup,
  IndexOutOfRange,
  BadMagic,
  LengthMismatch,
  InvalidShape,
  // preprocess / labels
  AllPixelsInvalid,
  DegenerateRange,
  ImageTooSmall,
  DegenerateRect,
  // nn / model / training
  ShapeMismatch,
  OddSpatialDims,
  NonScalarOutput,
  NonFiniteValue,
  InvalidConfig,
  CrcMismatch,
  VersionUnsupported,
  CountMismatch,
  EmptyDataset,
  // decode / sim
  EmptyMaps,
  NonPositiveDepth,
  PlacementFailed,
  EmptyTrials,
  // cli
  MissingCheckpoint,
  IoError,
  Usage,
};

std::string_view to_string(ErrorCode code);

/// Coarse classification used to pick a process exit code.
enum class ErrorKind { Usage, Data, Internal };

ErrorKind kind_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Error(ErrorCode code, const std::string& message, std::size_t line)
      : std::runtime_error(std::string(to_string(code)) + " (line " + std::to_string(line) +
                           "): " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  /// 1-based line number for text-format errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace pixelgrasp
