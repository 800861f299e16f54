#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vsum/image.hpp"

namespace vsum {

enum class ChromaLayout { k420, k422, k444, kMono };

struct Y4mHeader {
  int width = 0;
  int height = 0;
  int fps_num = 0;
  int fps_den = 0;
  char interlace = '?';
  int aspect_num = 0;
  int aspect_den = 0;
  std::string colorspace = "420jpeg";
  ChromaLayout layout = ChromaLayout::k420;

  /// Bytes of planar payload in one frame.
  std::size_t frame_bytes() const noexcept;
};

/// Parses the stream header line (without the trailing newline).
/// Throws Error(kFormat) on a malformed or unsupported header.
Y4mHeader parse_y4m_header(std::string_view line);

/// YCbCr (BT.601 full range) to RGB, chroma upsampled by replication.
/// Mono streams decode to a single channel holding Y/255.
Image decode_y4m_payload(const Y4mHeader& header, std::span<const std::uint8_t> payload);

/// Uncompressed YUV4MPEG2 file with random access to frames.
class Y4mFile {
 public:
  explicit Y4mFile(std::filesystem::path path);

  const Y4mHeader& header() const noexcept { return header_; }
  std::size_t frame_count() const noexcept { return offsets_.size(); }
  Image read_frame(std::size_t index) const;

 private:
  std::filesystem::path path_;
  Y4mHeader header_;
  std::vector<std::uint64_t> offsets_;  // payload start of each frame
};

}  // namespace vsum
