#ifndef GRADING_SPECTRAL_HPP_
#define GRADING_SPECTRAL_HPP_

#include <array>

#include "grading/foreground.hpp"
#include "grading/image.hpp"

namespace grading {

// Normalized RGB spectral pattern: for each channel, the frequency of each
// of the 256 intensities among foreground pixels. Index layout is fixed
// project-wide: 0-255 red, 256-511 green, 512-767 blue, intensity-ascending.
// Every 256-bin channel block sums to 1.
struct SpectralPattern {
  static constexpr int kChannelBins = 256;
  static constexpr int kSize = 3 * kChannelBins;
  static constexpr int kRedOffset = 0;
  static constexpr int kGreenOffset = 256;
  static constexpr int kBlueOffset = 512;

  std::array<double, kSize> values{};

  double channel_sum(int channel) const {
    double sum = 0;
    for (int i = 0; i < kChannelBins; ++i)
      sum += values[channel * kChannelBins + i];
    return sum;
  }
};

// Histograms the foreground pixels of img; background pixels contribute
// nothing. Throws Error on dimension mismatch or an empty mask.
SpectralPattern extract_spectral_pattern(const RgbImage& img,
                                         const ForegroundMask& mask);

}  // namespace grading

#endif  // GRADING_SPECTRAL_HPP_
