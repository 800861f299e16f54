#include "vsum/y4m.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace vsum {

namespace {

constexpr std::string_view kMagic = "YUV4MPEG2";
constexpr std::string_view kFrameTag = "FRAME";
constexpr std::size_t kMaxHeaderLine = 4096;

[[noreturn]] void bad(const std::string& why) { throw Error(ErrorCode::kFormat, "Y4M: " + why); }

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad(std::string("bad ") + what + " value");
  return v;
}

void parse_ratio(std::string_view s, int& num, int& den, const char* what) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) bad(std::string("bad ") + what + " ratio");
  num = parse_int(s.substr(0, colon), what);
  den = parse_int(s.substr(colon + 1), what);
}

ChromaLayout layout_for(std::string_view cs) {
  if (cs == "420jpeg" || cs == "420paldv" || cs == "420mpeg2" || cs == "420") {
    return ChromaLayout::k420;
  }
  if (cs == "422") return ChromaLayout::k422;
  if (cs == "444") return ChromaLayout::k444;
  if (cs == "mono") return ChromaLayout::kMono;
  bad("unsupported colorspace C" + std::string(cs));
}

// Reads one '\n'-terminated line; returns false at clean EOF.
bool read_line(std::istream& in, std::string& line) {
  line.clear();
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '\n') return true;
    if (line.size() >= kMaxHeaderLine) bad("header line too long");
    line.push_back(ch);
  }
  if (!line.empty()) bad("truncated header line");
  return false;
}

}  // namespace

std::size_t Y4mHeader::frame_bytes() const noexcept {
  const auto luma = static_cast<std::size_t>(width) * height;
  const auto cw = static_cast<std::size_t>((width + 1) / 2);
  const auto ch = static_cast<std::size_t>((height + 1) / 2);
  switch (layout) {
    case ChromaLayout::k420: return luma + 2 * cw * ch;
    case ChromaLayout::k422: return luma + 2 * cw * static_cast<std::size_t>(height);
    case ChromaLayout::k444: return 3 * luma;
    case ChromaLayout::kMono: return luma;
  }
  return luma;
}

Y4mHeader parse_y4m_header(std::string_view line) {
  if (line.substr(0, kMagic.size()) != kMagic) bad("missing YUV4MPEG2 signature");
  std::string_view rest = line.substr(kMagic.size());
  if (!rest.empty() && rest.front() != ' ') bad("missing separator after signature");

  Y4mHeader h;
  bool have_w = false;
  bool have_h = false;
  while (!rest.empty()) {
    rest.remove_prefix(std::min(rest.find_first_not_of(' '), rest.size()));
    if (rest.empty()) break;
    const auto end = std::min(rest.find(' '), rest.size());
    const std::string_view token = rest.substr(0, end);
    rest.remove_prefix(end);
    const std::string_view value = token.substr(1);
    switch (token.front()) {
      case 'W':
        h.width = parse_int(value, "W");
        have_w = true;
        break;
      case 'H':
        h.height = parse_int(value, "H");
        have_h = true;
        break;
      case 'F': parse_ratio(value, h.fps_num, h.fps_den, "F"); break;
      case 'A': parse_ratio(value, h.aspect_num, h.aspect_den, "A"); break;
      case 'I':
        if (value.size() != 1) bad("bad I value");
        h.interlace = value.front();
        break;
      case 'C':
        h.colorspace = std::string(value);
        break;
      case 'X': break;  // application-specific, ignored
      default: bad("unknown header parameter '" + std::string(token) + "'");
    }
  }
  if (!have_w || !have_h) bad("header lacks W or H");
  if (h.width < 1 || h.height < 1) bad("non-positive frame dimensions");
  h.layout = layout_for(h.colorspace);
  return h;
}

Image decode_y4m_payload(const Y4mHeader& h, std::span<const std::uint8_t> payload) {
  if (payload.size() != h.frame_bytes()) bad("payload size mismatch");
  const int w = h.width;
  const int ht = h.height;
  const std::size_t luma = static_cast<std::size_t>(w) * ht;
  if (h.layout == ChromaLayout::kMono) {
    return image_from_bytes(payload.first(luma), w, ht, 1);
  }

  int cw = w;
  int ch = ht;
  int sx = 0;
  int sy = 0;
  if (h.layout != ChromaLayout::k444) {
    cw = (w + 1) / 2;
    sx = 1;
  }
  if (h.layout == ChromaLayout::k420) {
    ch = (ht + 1) / 2;
    sy = 1;
  }
  const std::uint8_t* yp = payload.data();
  const std::uint8_t* up = yp + luma;
  const std::uint8_t* vp = up + static_cast<std::size_t>(cw) * ch;

  Image img(w, ht, 3);
  Plane& r = img.plane(0);
  Plane& g = img.plane(1);
  Plane& b = img.plane(2);
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      const double yy = yp[static_cast<std::size_t>(y) * w + x];
      const std::size_t ci = static_cast<std::size_t>(y >> sy) * cw + (x >> sx);
      const double cb = up[ci] - 128.0;
      const double cr = vp[ci] - 128.0;
      r(x, y) = std::clamp((yy + 1.402 * cr) / 255.0, 0.0, 1.0);
      g(x, y) = std::clamp((yy - 0.344136 * cb - 0.714136 * cr) / 255.0, 0.0, 1.0);
      b(x, y) = std::clamp((yy + 1.772 * cb) / 255.0, 0.0, 1.0);
    }
  }
  return img;
}

Y4mFile::Y4mFile(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path_.string() + "'");
  std::string line;
  if (!read_line(in, line)) bad("empty file");
  header_ = parse_y4m_header(line);

  const auto payload = static_cast<std::streamoff>(header_.frame_bytes());
  while (read_line(in, line)) {
    if (line.substr(0, kFrameTag.size()) != kFrameTag ||
        (line.size() > kFrameTag.size() && line[kFrameTag.size()] != ' ')) {
      bad("expected FRAME marker in '" + path_.string() + "'");
    }
    const std::streamoff start = in.tellg();
    in.seekg(payload, std::ios::cur);
    // Seeking past EOF succeeds on ifstream; confirm the last byte is there.
    in.seekg(-1, std::ios::cur);
    char last = 0;
    if (!in.get(last)) bad("truncated frame payload in '" + path_.string() + "'");
    offsets_.push_back(static_cast<std::uint64_t>(start));
  }
}

Image Y4mFile::read_frame(std::size_t index) const {
  if (index >= offsets_.size()) {
    throw Error(ErrorCode::kNoFrames, "frame index " + std::to_string(index) + " out of range");
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path_.string() + "'");
  std::vector<std::uint8_t> payload(header_.frame_bytes());
  in.seekg(static_cast<std::streamoff>(offsets_[index]));
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(payload.size()))) {
    bad("truncated frame payload in '" + path_.string() + "'");
  }
  return decode_y4m_payload(header_, payload);
}

}  // namespace vsum
