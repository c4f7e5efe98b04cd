#include "grading/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "grading/error.hpp"

namespace grading {

namespace {

int clamp_coord(int v, int hi) { return std::clamp(v, 0, hi - 1); }

std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> blur(const GrayImage& img, double sigma, int radius) {
  const int w = img.width, h = img.height;
  const std::vector<double> kernel = gaussian_kernel(sigma, radius);

  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * img.at(clamp_coord(x + i, w), y);
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }

  std::vector<double> out(tmp.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>(clamp_coord(y + i, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

}  // namespace

void EdgeParams::validate() const {
  if (!(blur_sigma > 0)) throw Error("blur_sigma must be positive");
  if (!(low_threshold > 0) || low_threshold > high_threshold)
    throw Error("thresholds must satisfy 0 < low <= high");
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(edge.begin(), edge.end(), 1));
}

EdgeMap detect_edges(const GrayImage& img, const EdgeParams& params) {
  params.validate();
  const int w = img.width, h = img.height;
  const int radius = std::max(1, static_cast<int>(std::ceil(3 * params.blur_sigma)));
  if (w < 2 * radius + 1 || h < 2 * radius + 1)
    throw Error("image " + std::to_string(w) + "x" + std::to_string(h) +
                " smaller than blur kernel support " +
                std::to_string(2 * radius + 1));

  const std::vector<double> smooth = blur(img, params.blur_sigma, radius);
  auto s = [&](int x, int y) {
    return smooth[static_cast<std::size_t>(clamp_coord(y, h)) * w +
                  clamp_coord(x, w)];
  };

  // Sobel gradient.
  std::vector<double> gx(smooth.size()), gy(smooth.size()), mag(smooth.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                        (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
      const double dy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                        (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = dx;
      gy[i] = dy;
      mag[i] = std::hypot(dx, dy);
    }

  EdgeMap map;
  map.width = w;
  map.height = h;
  map.edge.assign(mag.size(), 0);

  const double max_mag = *std::max_element(mag.begin(), mag.end());
  if (max_mag == 0.0) return map;  // constant image

  // Non-maximum suppression. The gradient direction is quantized to one of
  // four axes; a pixel survives if it strictly beats the backward neighbor
  // and at least ties the forward one (the asymmetry keeps exactly one pixel
  // of a two-pixel plateau straddling an ideal step).
  static constexpr int kDir[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  std::vector<double> thin(mag.size(), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mag[i] == 0.0) continue;
      double angle = std::atan2(gy[i], gx[i]);
      if (angle < 0) angle += std::numbers::pi;
      const int bucket =
          static_cast<int>((angle + std::numbers::pi / 8) / (std::numbers::pi / 4)) % 4;
      const int dx = kDir[bucket][0], dy = kDir[bucket][1];
      const double fwd =
          mag[static_cast<std::size_t>(clamp_coord(y + dy, h)) * w + clamp_coord(x + dx, w)];
      const double bwd =
          mag[static_cast<std::size_t>(clamp_coord(y - dy, h)) * w + clamp_coord(x - dx, w)];
      if (mag[i] > bwd && mag[i] >= fwd) thin[i] = mag[i];
    }

  const double max_thin = *std::max_element(thin.begin(), thin.end());
  if (max_thin == 0.0) return map;
  const double high = params.high_threshold * max_thin;
  const double low = params.low_threshold * max_thin;

  // Hysteresis: seed from strong pixels, grow through weak ones (8-connected).
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (thin[i] >= high && !map.edge[i]) {
        map.edge[i] = 1;
        stack.emplace_back(x, y);
        while (!stack.empty()) {
          const auto [cx, cy] = stack.back();
          stack.pop_back();
          for (int ny = cy - 1; ny <= cy + 1; ++ny)
            for (int nx = cx - 1; nx <= cx + 1; ++nx) {
              if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
              const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
              if (!map.edge[j] && thin[j] >= low) {
                map.edge[j] = 1;
                stack.emplace_back(nx, ny);
              }
            }
        }
      }
    }
  return map;
}

}  // namespace grading
