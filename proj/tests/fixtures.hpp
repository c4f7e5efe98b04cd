// Shared test fixtures: tiny deterministic renderers and temp-dir helpers.
#ifndef GRADING_TESTS_FIXTURES_HPP_
#define GRADING_TESTS_FIXTURES_HPP_

#include <cmath>
#include <filesystem>
#include <string>

#include "grading/image.hpp"
#include "grading/rng.hpp"

namespace fixtures {

// Anti-aliased filled disk on a plain field (4x4 supersampling).
inline grading::RgbImage render_disk(int size, double cx, double cy, double r,
                                     grading::Rgb fg, grading::Rgb bg) {
  grading::RgbImage img = grading::make_image(size, size, bg);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      int inside = 0;
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) {
          const double px = x + (sx + 0.5) / 4.0 - cx;
          const double py = y + (sy + 0.5) / 4.0 - cy;
          if (px * px + py * py <= r * r) ++inside;
        }
      if (inside == 0) continue;
      const double a = inside / 16.0;
      auto blend = [a](std::uint8_t f, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround(a * f + (1 - a) * b));
      };
      img.at(x, y) = {blend(fg.r, bg.r), blend(fg.g, bg.g), blend(fg.b, bg.b)};
    }
  return img;
}

inline grading::RgbImage random_image(int w, int h, grading::Rng& rng) {
  grading::RgbImage img = grading::make_image(w, h);
  for (auto& p : img.pixels)
    p = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
         static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
         static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
  return img;
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path temp_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("grading_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#endif  // GRADING_TESTS_FIXTURES_HPP_
