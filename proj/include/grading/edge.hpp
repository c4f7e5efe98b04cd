#ifndef GRADING_EDGE_HPP_
#define GRADING_EDGE_HPP_

#include <cstdint>
#include <vector>

#include "grading/image.hpp"

namespace grading {

// Canny parameters. The hysteresis thresholds are fractions of the maximum
// gradient magnitude remaining after non-maximum suppression, so they are
// insensitive to the absolute contrast of the scene.
struct EdgeParams {
  double blur_sigma = 1.4;
  double low_threshold = 0.1;
  double high_threshold = 0.3;

  void validate() const;  // throws Error on out-of-range values
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> edge;  // 0 or 1

  bool at(int x, int y) const {
    return edge[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const;
};

// Classical Canny: Gaussian blur, Sobel gradient, non-maximum suppression,
// hysteresis linking. Convolution borders use clamp-to-edge padding.
// Throws Error when the image is smaller than the blur kernel support.
EdgeMap detect_edges(const GrayImage& img, const EdgeParams& params = {});

}  // namespace grading

#endif  // GRADING_EDGE_HPP_
