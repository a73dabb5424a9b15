#include "pixelgrasp/error.hpp"

namespace pixelgrasp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingHeaderField: return "MissingHeaderField";
    case ErrorCode::PointCountMismatch: return "PointCountMismatch";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::TruncatedGroup: return "TruncatedGroup";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::AllPixelsInvalid: return "AllPixelsInvalid";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::DegenerateRect: return "DegenerateRect";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OddSpatialDims: return "OddSpatialDims";
    case ErrorCode::NonScalarOutput: return "NonScalarOutput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::CrcMismatch: return "CrcMismatch";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyMaps: return "EmptyMaps";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::PlacementFailed: return "PlacementFailed";
    case ErrorCode::EmptyTrials: return "EmptyTrials";
    case ErrorCode::MissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return ErrorKind::Usage;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::OddSpatialDims:
    case ErrorCode::NonScalarOutput:
    case ErrorCode::NonFiniteValue:
      return ErrorKind::Internal;
    default:
      return ErrorKind::Data;
  }
}

}  // namespace pixelgrasp
