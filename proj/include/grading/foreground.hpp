#ifndef GRADING_FOREGROUND_HPP_
#define GRADING_FOREGROUND_HPP_

#include <cstdint>
#include <vector>

#include "grading/edge.hpp"
#include "grading/image.hpp"

namespace grading {

struct ForegroundMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> member;  // 1 = produce pixel

  bool at(int x, int y) const {
    return member[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const;
};

// Separates the produce from the background: flood fill from every border
// pixel across non-edge pixels marks the background; whatever the flood
// cannot reach (the region enclosed by the edge contour) is foreground, and
// the largest 4-connected foreground component is kept.
// Throws ExtractionFailed when no enclosed region exists.
ForegroundMask extract_foreground(const RgbImage& img, const EdgeMap& edges);

}  // namespace grading

#endif  // GRADING_FOREGROUND_HPP_
