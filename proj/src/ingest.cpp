#include "vsum/ingest.hpp"

#include <algorithm>
#include <fstream>

#include "vsum/codec.hpp"
#include "vsum/y4m.hpp"

namespace vsum {

namespace fs = std::filesystem;

namespace {

std::string shape_string(int w, int h, int c) {
  return std::to_string(w) + "x" + std::to_string(h) + "x" + std::to_string(c);
}

class DirectorySource final : public FrameSource {
 public:
  explicit DirectorySource(std::vector<fs::path> files) : files_(std::move(files)) {}

  std::size_t frame_count() const override { return files_.size(); }
  Image read(std::size_t index) const override { return read_image(files_.at(index)); }

  const std::vector<fs::path>& files() const noexcept { return files_; }

 private:
  std::vector<fs::path> files_;
};

class Y4mSource final : public FrameSource {
 public:
  explicit Y4mSource(const fs::path& path) : file_(path) {}

  std::size_t frame_count() const override { return file_.frame_count(); }
  Image read(std::size_t index) const override { return file_.read_frame(index); }
  const Y4mFile& file() const noexcept { return file_; }

 private:
  Y4mFile file_;
};

class MemorySource final : public FrameSource {
 public:
  explicit MemorySource(std::vector<Image> frames) : frames_(std::move(frames)) {}

  std::size_t frame_count() const override { return frames_.size(); }
  Image read(std::size_t index) const override { return frames_.at(index); }

 private:
  std::vector<Image> frames_;
};

bool has_y4m_signature(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[9] = {};
  return in.read(magic, sizeof magic) && std::string_view(magic, sizeof magic) == "YUV4MPEG2";
}

std::vector<fs::path> list_raster_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    ImageFormat format{};
    if (entry.is_regular_file() && raster_format_from_extension(entry.path(), format)) {
      files.push_back(entry.path());
    }
  }
  // Byte-wise order on the file name alone.
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

}  // namespace

FrameStream::FrameStream(std::shared_ptr<const FrameSource> source, std::string label, int width,
                         int height, int channels)
    : source_(std::move(source)),
      label_(std::move(label)),
      width_(width),
      height_(height),
      channels_(channels),
      count_(source_->frame_count()) {}

FrameStream FrameStream::open(const fs::path& path, StreamKind kind) {
  std::error_code ec;
  const auto status = fs::status(path, ec);
  if (ec || !fs::exists(status)) {
    throw Error(ErrorCode::kIo, "input path does not exist: '" + path.string() + "'");
  }
  if (kind == StreamKind::kAuto) {
    if (fs::is_directory(status)) {
      kind = StreamKind::kDirectory;
    } else if (has_y4m_signature(path)) {
      kind = StreamKind::kY4m;
    } else {
      throw Error(ErrorCode::kFormat,
                  "'" + path.string() + "' is neither a frame directory nor a Y4M file");
    }
  }

  if (kind == StreamKind::kDirectory) {
    if (!fs::is_directory(status)) {
      throw Error(ErrorCode::kIo, "not a directory: '" + path.string() + "'");
    }
    auto files = list_raster_files(path);
    if (files.empty()) {
      throw Error(ErrorCode::kNoFrames, "no image frames in '" + path.string() + "'");
    }
    const ImageHeader first = probe_image(files.front());
    for (std::size_t i = 1; i < files.size(); ++i) {
      const ImageHeader h = probe_image(files[i]);
      if (h.width != first.width || h.height != first.height || h.channels != first.channels) {
        throw Error(ErrorCode::kInconsistentFrames,
                    "frame '" + files[i].filename().string() + "' is " +
                        shape_string(h.width, h.height, h.channels) + " but '" +
                        files.front().filename().string() + "' is " +
                        shape_string(first.width, first.height, first.channels));
      }
    }
    return FrameStream(std::make_shared<DirectorySource>(std::move(files)), path.string(),
                       first.width, first.height, first.channels);
  }

  auto source = std::make_shared<Y4mSource>(path);
  if (source->frame_count() == 0) {
    throw Error(ErrorCode::kNoFrames, "Y4M file has no frames: '" + path.string() + "'");
  }
  const Y4mHeader& h = source->file().header();
  const int channels = h.layout == ChromaLayout::kMono ? 1 : 3;
  return FrameStream(std::move(source), path.string(), h.width, h.height, channels);
}

FrameStream FrameStream::from_frames(std::vector<Image> frames, std::string label) {
  if (frames.empty()) throw Error(ErrorCode::kNoFrames, "in-memory stream has no frames");
  const Image& first = frames.front();
  for (const auto& f : frames) {
    if (!f.same_shape(first)) {
      throw Error(ErrorCode::kInconsistentFrames,
                  "in-memory frames differ in shape: " +
                      shape_string(f.width(), f.height(), f.channels()) + " vs " +
                      shape_string(first.width(), first.height(), first.channels()));
    }
  }
  const int w = first.width();
  const int h = first.height();
  const int c = first.channels();
  return FrameStream(std::make_shared<MemorySource>(std::move(frames)), std::move(label), w, h, c);
}

Image FrameStream::frame(std::size_t index) const {
  if (index >= count_) {
    throw Error(ErrorCode::kNoFrames, "frame index " + std::to_string(index) + " out of range (" +
                                          std::to_string(count_) + " frames)");
  }
  Image img = source_->read(index);
  if (img.width() != width_ || img.height() != height_ || img.channels() != channels_) {
    throw Error(ErrorCode::kInconsistentFrames,
                "frame " + std::to_string(index) + " of '" + label_ + "' changed shape to " +
                    shape_string(img.width(), img.height(), img.channels()));
  }
  return img;
}

std::optional<Image> FrameStream::next() {
  if (position_ >= count_) return std::nullopt;
  return frame(position_++);
}

FrameStream FrameStream::preload() const {
  std::vector<Image> frames;
  frames.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) frames.push_back(frame(i));
  return from_frames(std::move(frames), label_);
}

Accumulator::Accumulator(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  sums_.assign(static_cast<std::size_t>(channels),
               std::vector<long double>(static_cast<std::size_t>(width) * height, 0.0L));
}

void Accumulator::add(const Image& frame) {
  if (frame.width() != width_ || frame.height() != height_ || frame.channels() != channels_) {
    throw Error(ErrorCode::kInconsistentFrames, "accumulated frame shape mismatch");
  }
  for (int c = 0; c < channels_; ++c) {
    auto src = frame.plane(c).samples();
    auto& dst = sums_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  ++frames_seen_;
}

Image Accumulator::mean() const {
  if (frames_seen_ == 0) throw Error(ErrorCode::kNoFrames, "mean of zero frames");
  Image out(width_, height_, channels_);
  const auto n = static_cast<long double>(frames_seen_);
  for (int c = 0; c < channels_; ++c) {
    auto dst = out.plane(c).samples();
    const auto& src = sums_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<double>(src[i] / n);
  }
  return out;
}

Image first_frame(const FrameStream& stream) { return stream.frame(0); }

Image temporal_average(const FrameStream& stream) {
  Accumulator acc(stream.width(), stream.height(), stream.channels());
  for (std::size_t i = 0; i < stream.frame_count(); ++i) acc.add(stream.frame(i));
  return acc.mean();
}

SourcePair build_sources(const FrameStream& stream) {
  Accumulator acc(stream.width(), stream.height(), stream.channels());
  Image first = stream.frame(0);
  acc.add(first);
  for (std::size_t i = 1; i < stream.frame_count(); ++i) acc.add(stream.frame(i));
  return {std::move(first), acc.mean()};
}

}  // namespace vsum
