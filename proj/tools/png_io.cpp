#include "png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "pixelgrasp/error.hpp"

namespace pixelgrasp::cli {

io::RgbImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(ErrorCode::IoError, path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::IoError, path.string() + ": " + image.message);
  }
  io::RgbImage rgb;
  for (auto& plane : rgb.channels) plane = Plane(image.height, image.width);
  for (std::size_t i = 0; i < static_cast<std::size_t>(image.width) * image.height; ++i)
    for (std::size_t c = 0; c < 3; ++c) rgb.channels[c].data[i] = buffer[3 * i + c];
  return rgb;
}

void write_png(const std::filesystem::path& path, const io::RgbImage& rgb) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(rgb.cols());
  image.height = static_cast<png_uint_32>(rgb.rows());
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(rgb.rows() * rgb.cols() * 3);
  for (std::size_t i = 0; i < rgb.rows() * rgb.cols(); ++i)
    for (std::size_t c = 0; c < 3; ++c)
      buffer[3 * i + c] = static_cast<std::uint8_t>(
          std::clamp(std::lround(rgb.channels[c].data[i]), 0L, 255L));
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw Error(ErrorCode::IoError, path.string() + ": " + image.message);
}

}  // namespace pixelgrasp::cli
