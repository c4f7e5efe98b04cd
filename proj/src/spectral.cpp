#include "grading/spectral.hpp"

#include <string>

#include "grading/error.hpp"

namespace grading {

SpectralPattern extract_spectral_pattern(const RgbImage& img,
                                         const ForegroundMask& mask) {
  if (mask.width != img.width || mask.height != img.height)
    throw Error("mask " + std::to_string(mask.width) + "x" +
                std::to_string(mask.height) + " does not match image " +
                std::to_string(img.width) + "x" + std::to_string(img.height));

  std::array<std::size_t, SpectralPattern::kSize> counts{};
  std::size_t total = 0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    if (!mask.member[i]) continue;
    const Rgb& p = img.pixels[i];
    ++counts[SpectralPattern::kRedOffset + p.r];
    ++counts[SpectralPattern::kGreenOffset + p.g];
    ++counts[SpectralPattern::kBlueOffset + p.b];
    ++total;
  }
  if (total == 0) throw Error("empty foreground mask");

  SpectralPattern pattern;
  for (int i = 0; i < SpectralPattern::kSize; ++i)
    pattern.values[i] =
        static_cast<double>(counts[i]) / static_cast<double>(total);
  return pattern;
}

}  // namespace grading
