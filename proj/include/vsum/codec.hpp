#pragma once

#include <filesystem>
#include <string_view>

#include "vsum/image.hpp"

namespace vsum {

enum class ImageFormat { kPng, kJpeg, kPnm };

struct ImageHeader {
  ImageFormat format;
  int width;
  int height;
  /// Channels after decode: gray (and gray+alpha) -> 1, everything else -> 3.
  int channels;
};

/// Format from the file extension (case-insensitive): png, jpg/jpeg, pgm/ppm.
/// Returns false for anything else.
bool raster_format_from_extension(const std::filesystem::path& path, ImageFormat& format);

/// Reads dimensions and channel count without decoding pixel data.
ImageHeader probe_image(const std::filesystem::path& path);

/// Decodes a PNG (8/16-bit, palette expanded, alpha dropped), baseline JPEG, or
/// binary PGM/PPM with maxval 255.
Image read_image(const std::filesystem::path& path);

/// Writes PNG (8 or 16 bit) or, for .pgm/.ppm paths, binary PNM (8 bit only).
/// Parent directories must exist. Throws Error(kIo) on failure.
void write_image(const std::filesystem::path& path, const Image& img, BitDepth depth = BitDepth::k8);

}  // namespace vsum
