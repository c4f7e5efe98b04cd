#include "grading/image.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>

#include "grading/error.hpp"
#include "grading/util.hpp"

namespace grading {

namespace {

struct FileHandle {
  explicit FileHandle(const std::filesystem::path& path, const char* mode)
      : fp(std::fopen(path.string().c_str(), mode)) {}
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
  FILE* fp = nullptr;
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

RgbImage read_png_file(const std::filesystem::path& path) {
  FileHandle file(path, "rb");
  if (!file.fp) throw IoError("cannot open " + path.string());

  PngReadGuard guard;
  guard.png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!guard.png) throw Error("png_create_read_struct failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw Error("png_create_info_struct failed");

  if (setjmp(png_jmpbuf(guard.png)))
    throw DecodeError("corrupt PNG: " + path.string());

  png_init_io(guard.png, file.fp);
  png_read_info(guard.png, guard.info);

  const png_uint_32 width = png_get_image_width(guard.png, guard.info);
  const png_uint_32 height = png_get_image_height(guard.png, guard.info);
  if (width == 0 || height == 0)
    throw DecodeError("zero-dimension PNG: " + path.string());

  const int color_type = png_get_color_type(guard.png, guard.info);
  const int bit_depth = png_get_bit_depth(guard.png, guard.info);

  // Normalize every input variant to 8-bit RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(guard.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(guard.png);
  if (png_get_valid(guard.png, guard.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(guard.png);
  if (bit_depth == 16) png_set_strip_16(guard.png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(guard.png);
  png_set_strip_alpha(guard.png);
  png_read_update_info(guard.png, guard.info);

  if (png_get_rowbytes(guard.png, guard.info) != width * 3)
    throw DecodeError("unexpected PNG row layout: " + path.string());

  RgbImage img = make_image(static_cast<int>(width), static_cast<int>(height));
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(&img.pixels[y * width]);
  png_read_image(guard.png, rows.data());
  png_read_end(guard.png, nullptr);
  return img;
}

// PPM header token reader: skips whitespace and '#' comments.
std::string next_ppm_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() &&
         !std::isspace(static_cast<unsigned char>(data[pos])))
    ++pos;
  return data.substr(start, pos - start);
}

RgbImage read_ppm_file(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  if (next_ppm_token(data, pos) != "P6")
    throw DecodeError("not a P6 PPM: " + path.string());

  long width = 0, height = 0, maxval = 0;
  try {
    width = parse_long(next_ppm_token(data, pos));
    height = parse_long(next_ppm_token(data, pos));
    maxval = parse_long(next_ppm_token(data, pos));
  } catch (const DecodeError&) {
    throw DecodeError("bad PPM header: " + path.string());
  }
  if (width <= 0 || height <= 0)
    throw DecodeError("zero-dimension PPM: " + path.string());
  if (maxval != 255)
    throw DecodeError("unsupported PPM maxval " + std::to_string(maxval) +
                      ": " + path.string());
  if (pos >= data.size()) throw DecodeError("truncated PPM: " + path.string());
  ++pos;  // single whitespace byte after maxval

  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (data.size() - pos < need)
    throw DecodeError("truncated PPM: " + path.string());

  RgbImage img = make_image(static_cast<int>(width), static_cast<int>(height));
  std::memcpy(img.pixels.data(), data.data() + pos, need);
  return img;
}

}  // namespace

RgbImage make_image(int width, int height, Rgb fill) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage gray;
  gray.width = img.width;
  gray.height = img.height;
  gray.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const Rgb& p = img.pixels[i];
    const double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    gray.pixels[i] = static_cast<std::uint8_t>(std::lround(y));
  }
  return gray;
}

RgbImage load_image(const std::filesystem::path& path) {
  const std::string head = [&] {
    FileHandle file(path, "rb");
    if (!file.fp) throw IoError("cannot open " + path.string());
    char buf[8] = {};
    const std::size_t n = std::fread(buf, 1, sizeof(buf), file.fp);
    return std::string(buf, n);
  }();

  static const unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G',
                                             '\r', '\n', 0x1a, '\n'};
  if (head.size() >= 8 && std::memcmp(head.data(), kPngMagic, 8) == 0)
    return read_png_file(path);
  if (head.size() >= 2 && head[0] == 'P' && head[1] == '6')
    return read_ppm_file(path);
  throw DecodeError("unsupported image format: " + path.string());
}

void save_png(const std::filesystem::path& path, const RgbImage& img) {
  FileHandle file(path, "wb");
  if (!file.fp) throw IoError("cannot open " + path.string() + " for writing");

  PngWriteGuard guard;
  guard.png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!guard.png) throw Error("png_create_write_struct failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw Error("png_create_info_struct failed");

  if (setjmp(png_jmpbuf(guard.png)))
    throw IoError("PNG write failed: " + path.string());

  png_init_io(guard.png, file.fp);
  png_set_IHDR(guard.png, guard.info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(guard.png, guard.info);

  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<Rgb*>(&img.pixels[static_cast<std::size_t>(y) * img.width]));
  png_write_image(guard.png, rows.data());
  png_write_end(guard.png, nullptr);
}

void save_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::ostringstream out;
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size() * 3));
  write_file_atomic(path, out.str());
}

void save_pgm(const std::filesystem::path& path, int width, int height,
              const std::vector<std::uint8_t>& pixels) {
  std::ostringstream out;
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  write_file_atomic(path, out.str());
}

}  // namespace grading
