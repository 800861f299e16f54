#include "vsum/codec.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace vsum {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return f;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

[[noreturn]] void format_error(const fs::path& path, const std::string& why) {
  throw Error(ErrorCode::kFormat, "'" + path.string() + "': " + why);
}

// ---- PNM ------------------------------------------------------------------

struct PnmHeader {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::streamoff data_offset = 0;
};

PnmHeader parse_pnm_header(std::istream& in, const fs::path& path) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    format_error(path, "not a binary PGM/PPM (P5/P6)");
  }
  auto next_int = [&]() {
    int ch = in.get();
    for (;;) {
      while (ch != EOF && std::isspace(ch)) ch = in.get();
      if (ch == '#') {
        while (ch != EOF && ch != '\n') ch = in.get();
        continue;
      }
      break;
    }
    if (ch == EOF || !std::isdigit(ch)) format_error(path, "malformed PNM header");
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
      value = value * 10 + (ch - '0');
      if (value > 1 << 24) format_error(path, "PNM header value too large");
      ch = in.get();
    }
    // Exactly one whitespace byte separates maxval from the raster.
    if (ch == EOF || !std::isspace(ch)) format_error(path, "malformed PNM header");
    return static_cast<int>(value);
  };
  PnmHeader h;
  h.width = next_int();
  h.height = next_int();
  const int maxval = next_int();
  if (h.width < 1 || h.height < 1) format_error(path, "PNM dimensions must be positive");
  if (maxval != 255) format_error(path, "only maxval 255 is supported");
  h.channels = magic[1] == '5' ? 1 : 3;
  h.data_offset = in.tellg();
  return h;
}

Image read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  const PnmHeader h = parse_pnm_header(in, path);
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(h.width) * h.height * h.channels);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    format_error(path, "truncated PNM raster");
  }
  return image_from_bytes(raw, h.width, h.height, h.channels);
}

void write_pnm(const fs::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out << (img.channels() == 1 ? "P5" : "P6") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  const auto bytes = image_to_bytes(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

// ---- PNG ------------------------------------------------------------------

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
  ~PngReadState() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_bytep> rows;
  ~PngWriteState() { png_destroy_write_struct(&png, &info); }
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf) *buf = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

int png_channels_after_decode(int color_type) {
  return (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) ? 1 : 3;
}

// libpng reports errors through longjmp; everything that owns resources lives
// outside this function so nothing is skipped when it unwinds.
bool png_decode(std::FILE* file, PngReadState& st, std::string& err, bool header_only,
                ImageHeader& header, std::vector<std::uint16_t>& samples, int& sample_bits) {
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler,
                                  png_warning_handler);
  if (!st.png) return false;
  st.info = png_create_info_struct(st.png);
  if (!st.info) return false;
  if (setjmp(png_jmpbuf(st.png))) return false;

  png_init_io(st.png, file);
  png_read_info(st.png, st.info);
  const int color_type = png_get_color_type(st.png, st.info);
  const int bit_depth = png_get_bit_depth(st.png, st.info);
  header.format = ImageFormat::kPng;
  header.width = static_cast<int>(png_get_image_width(st.png, st.info));
  header.height = static_cast<int>(png_get_image_height(st.png, st.info));
  header.channels = png_channels_after_decode(color_type);
  if (header_only) return true;

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
  if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(st.png);
  png_set_strip_alpha(st.png);
  if (bit_depth == 16) png_set_swap(st.png);  // host little-endian words
  png_read_update_info(st.png, st.info);

  const int out_depth = png_get_bit_depth(st.png, st.info);
  const std::size_t rowbytes = png_get_rowbytes(st.png, st.info);
  const std::size_t count =
      static_cast<std::size_t>(header.width) * header.height * header.channels;
  auto& data = st.data;
  data.resize(rowbytes * static_cast<std::size_t>(header.height));
  st.rows.resize(static_cast<std::size_t>(header.height));
  for (int y = 0; y < header.height; ++y) st.rows[y] = data.data() + rowbytes * y;
  samples.resize(count);
  png_read_image(st.png, st.rows.data());
  png_read_end(st.png, nullptr);

  if (out_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      samples[i] = static_cast<std::uint16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) samples[i] = data[i];
  }
  sample_bits = out_depth;
  return true;
}

ImageHeader probe_png(const fs::path& path) {
  FilePtr f = open_file(path, "rb");
  PngReadState st;
  std::string err;
  ImageHeader h{};
  std::vector<std::uint16_t> unused;
  int bits = 0;
  if (!png_decode(f.get(), st, err, true, h, unused, bits)) format_error(path, "PNG: " + err);
  return h;
}

Image read_png(const fs::path& path) {
  FilePtr f = open_file(path, "rb");
  PngReadState st;
  std::string err;
  ImageHeader h{};
  std::vector<std::uint16_t> samples;
  int bits = 0;
  if (!png_decode(f.get(), st, err, false, h, samples, bits)) format_error(path, "PNG: " + err);
  if (bits == 8) {
    std::vector<std::uint8_t> bytes(samples.begin(), samples.end());
    return image_from_bytes(bytes, h.width, h.height, h.channels);
  }
  return image_from_words(samples, h.width, h.height, h.channels);
}

bool png_encode(std::FILE* file, PngWriteState& st, std::string& err, const Image& img,
                BitDepth depth, std::vector<png_byte>& data) {
  st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler,
                                   png_warning_handler);
  if (!st.png) return false;
  st.info = png_create_info_struct(st.png);
  if (!st.info) return false;
  if (setjmp(png_jmpbuf(st.png))) return false;

  png_init_io(st.png, file);
  const int bits = depth == BitDepth::k8 ? 8 : 16;
  const std::size_t rowbytes =
      static_cast<std::size_t>(img.width()) * img.channels() * (bits / 8);
  st.rows.resize(static_cast<std::size_t>(img.height()));
  for (int y = 0; y < img.height(); ++y) st.rows[y] = data.data() + rowbytes * y;
  png_set_IHDR(st.png, st.info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), bits,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st.png, st.info);
  png_write_image(st.png, st.rows.data());
  png_write_end(st.png, nullptr);
  return true;
}

void write_png(const fs::path& path, const Image& img, BitDepth depth) {
  const auto samples = image_to_samples(img, depth);
  std::vector<png_byte> data;
  if (depth == BitDepth::k8) {
    data.assign(samples.begin(), samples.end());
  } else {
    data.resize(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      data[2 * i] = static_cast<png_byte>(samples[i] >> 8);  // PNG is big-endian
      data[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xFF);
    }
  }
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  PngWriteState st;
  std::string err;
  if (!png_encode(f.get(), st, err, img, depth, data)) {
    throw Error(ErrorCode::kIo, "PNG encode failed for '" + path.string() + "': " + err);
  }
  if (std::fflush(f.get()) != 0) {
    throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
  }
}

// ---- JPEG -----------------------------------------------------------------

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

struct JpegDecompress {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  bool created = false;
  ~JpegDecompress() {
    if (created) jpeg_destroy_decompress(&cinfo);
  }
};

bool jpeg_decode(std::FILE* file, JpegDecompress& st, bool header_only, ImageHeader& header,
                 std::vector<std::uint8_t>& raw) {
  st.cinfo.err = jpeg_std_error(&st.err.base);
  st.err.base.error_exit = jpeg_error_exit;
  if (setjmp(st.err.jump)) return false;
  jpeg_create_decompress(&st.cinfo);
  st.created = true;
  jpeg_stdio_src(&st.cinfo, file);
  jpeg_read_header(&st.cinfo, TRUE);
  header.format = ImageFormat::kJpeg;
  header.width = static_cast<int>(st.cinfo.image_width);
  header.height = static_cast<int>(st.cinfo.image_height);
  header.channels = st.cinfo.num_components == 1 ? 1 : 3;
  if (header_only) return true;

  st.cinfo.out_color_space = header.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&st.cinfo);
  const std::size_t stride = static_cast<std::size_t>(st.cinfo.output_width) *
                             static_cast<std::size_t>(st.cinfo.output_components);
  raw.resize(stride * st.cinfo.output_height);
  while (st.cinfo.output_scanline < st.cinfo.output_height) {
    JSAMPROW row = raw.data() + stride * st.cinfo.output_scanline;
    jpeg_read_scanlines(&st.cinfo, &row, 1);
  }
  jpeg_finish_decompress(&st.cinfo);
  return true;
}

ImageHeader probe_jpeg(const fs::path& path) {
  FilePtr f = open_file(path, "rb");
  JpegDecompress st;
  ImageHeader h{};
  std::vector<std::uint8_t> unused;
  if (!jpeg_decode(f.get(), st, true, h, unused)) {
    format_error(path, std::string("JPEG: ") + st.err.message);
  }
  return h;
}

Image read_jpeg(const fs::path& path) {
  FilePtr f = open_file(path, "rb");
  JpegDecompress st;
  ImageHeader h{};
  std::vector<std::uint8_t> raw;
  if (!jpeg_decode(f.get(), st, false, h, raw)) {
    format_error(path, std::string("JPEG: ") + st.err.message);
  }
  return image_from_bytes(raw, h.width, h.height, h.channels);
}

ImageFormat require_format(const fs::path& path) {
  ImageFormat format{};
  if (!raster_format_from_extension(path, format)) {
    format_error(path, "unrecognized raster extension");
  }
  return format;
}

}  // namespace

bool raster_format_from_extension(const fs::path& path, ImageFormat& format) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    format = ImageFormat::kPng;
  } else if (ext == ".jpg" || ext == ".jpeg") {
    format = ImageFormat::kJpeg;
  } else if (ext == ".pgm" || ext == ".ppm") {
    format = ImageFormat::kPnm;
  } else {
    return false;
  }
  return true;
}

ImageHeader probe_image(const fs::path& path) {
  switch (require_format(path)) {
    case ImageFormat::kPng: return probe_png(path);
    case ImageFormat::kJpeg: return probe_jpeg(path);
    case ImageFormat::kPnm: {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
      const PnmHeader h = parse_pnm_header(in, path);
      return {ImageFormat::kPnm, h.width, h.height, h.channels};
    }
  }
  format_error(path, "unrecognized raster extension");
}

Image read_image(const fs::path& path) {
  switch (require_format(path)) {
    case ImageFormat::kPng: return read_png(path);
    case ImageFormat::kJpeg: return read_jpeg(path);
    case ImageFormat::kPnm: return read_pnm(path);
  }
  format_error(path, "unrecognized raster extension");
}

void write_image(const fs::path& path, const Image& img, BitDepth depth) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".ppm") {
    if (depth != BitDepth::k8) {
      throw Error(ErrorCode::kIo, "PNM output supports 8-bit only: '" + path.string() + "'");
    }
    if ((ext == ".pgm") != (img.channels() == 1)) {
      throw Error(ErrorCode::kIo, "channel count does not match extension of '" +
                                      path.string() + "'");
    }
    write_pnm(path, img);
    return;
  }
  write_png(path, img, depth);
}

}  // namespace vsum
