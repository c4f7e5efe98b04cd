#ifndef GRADING_IMAGE_HPP_
#define GRADING_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace grading {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major 8-bit color image.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool same_shape(int w, int h) const { return width == w && height == h; }
};

RgbImage make_image(int width, int height, Rgb fill = {});

// Row-major 8-bit gray image, intensities 0-255 (the project-wide convention).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// Rec.601 luma, rounded to the nearest integer.
GrayImage to_grayscale(const RgbImage& img);

// Decodes PNG or binary PPM (P6), dispatching on magic bytes.
// Throws IoError if unreadable, DecodeError if malformed or unsupported.
RgbImage load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const RgbImage& img);
void save_ppm(const std::filesystem::path& path, const RgbImage& img);

// 8-bit binary PGM (P5); used for mask debug dumps.
void save_pgm(const std::filesystem::path& path, int width, int height,
              const std::vector<std::uint8_t>& pixels);

}  // namespace grading

#endif  // GRADING_IMAGE_HPP_
