#pragma once

#include <filesystem>

#include "pixelgrasp/data_ingest.hpp"

namespace pixelgrasp::cli {

/// Decodes any PNG to 8-bit RGB planes. IoError on failure.
io::RgbImage read_png(const std::filesystem::path& path);

/// 8-bit RGB PNG; values are rounded and clamped to [0, 255].
void write_png(const std::filesystem::path& path, const io::RgbImage& image);

}  // namespace pixelgrasp::cli
