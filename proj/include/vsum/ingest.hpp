#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vsum/image.hpp"

namespace vsum {

enum class StreamKind { kAuto, kDirectory, kY4m };

/// Random-access provider of decoded frames behind a FrameStream.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t frame_count() const = 0;
  virtual Image read(std::size_t index) const = 0;
};

/// Ordered, re-readable sequence of frames sharing one shape.
///
/// Directory streams list files with a raster extension (png, jpg, jpeg, pgm,
/// ppm) sorted byte-wise by file name; every header is probed at open so a
/// size or channel mismatch is reported before any pixel is decoded.
class FrameStream {
 public:
  /// Throws kIo for a missing path, kNoFrames for an empty directory or Y4M
  /// without frames, kInconsistentFrames for mixed shapes, kFormat for a
  /// malformed Y4M header or an unrecognized file.
  static FrameStream open(const std::filesystem::path& path, StreamKind kind = StreamKind::kAuto);

  /// In-memory stream; frames must be non-empty and share one shape.
  static FrameStream from_frames(std::vector<Image> frames, std::string label = "<memory>");

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t frame_count() const noexcept { return count_; }
  const std::string& label() const noexcept { return label_; }

  /// Decodes frame `index` without moving the read position.
  Image frame(std::size_t index) const;

  std::optional<Image> next();
  void rewind() noexcept { position_ = 0; }
  std::size_t position() const noexcept { return position_; }

  /// Decodes every frame into an in-memory stream.
  FrameStream preload() const;

 private:
  FrameStream(std::shared_ptr<const FrameSource> source, std::string label, int width, int height,
              int channels);

  std::shared_ptr<const FrameSource> source_;
  std::string label_;
  int width_;
  int height_;
  int channels_;
  std::size_t count_;
  std::size_t position_ = 0;
};

/// Running per-sample sum in extended precision.
class Accumulator {
 public:
  Accumulator(int width, int height, int channels);

  void add(const Image& frame);
  std::size_t frames_seen() const noexcept { return frames_seen_; }

  /// Mean of everything added so far. Throws kNoFrames when empty.
  Image mean() const;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<std::vector<long double>> sums_;
  std::size_t frames_seen_ = 0;
};

struct SourcePair {
  Image first;
  Image average;
};

Image first_frame(const FrameStream& stream);

/// Mean over all frames, frame 0 included, accumulated in stream order.
Image temporal_average(const FrameStream& stream);

/// First frame and temporal average from a single pass over the stream.
SourcePair build_sources(const FrameStream& stream);

}  // namespace vsum
