#include "grading/foreground.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "grading/error.hpp"

namespace grading {

namespace {

// 4-connected flood over the predicate, marking visited cells.
void flood(int w, int h, std::vector<std::uint8_t>& visited,
           std::vector<std::pair<int, int>>& stack,
           const std::vector<std::uint8_t>& blocked) {
  static constexpr int kStep[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    for (const auto& d : kStep) {
      const int nx = x + d[0], ny = y + d[1];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::size_t i = static_cast<std::size_t>(ny) * w + nx;
      if (!visited[i] && !blocked[i]) {
        visited[i] = 1;
        stack.emplace_back(nx, ny);
      }
    }
  }
}

}  // namespace

std::size_t ForegroundMask::count() const {
  return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
}

ForegroundMask extract_foreground(const RgbImage& img, const EdgeMap& edges) {
  const int w = img.width, h = img.height;
  if (edges.width != w || edges.height != h)
    throw Error("edge map " + std::to_string(edges.width) + "x" +
                std::to_string(edges.height) + " does not match image " +
                std::to_string(w) + "x" + std::to_string(h));

  std::vector<std::uint8_t> background(edges.edge.size(), 0);
  std::vector<std::pair<int, int>> stack;
  auto seed = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (!background[i] && !edges.edge[i]) {
      background[i] = 1;
      stack.emplace_back(x, y);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  flood(w, h, background, stack, edges.edge);

  // Foreground = everything the flood could not reach (enclosed interior plus
  // the edge contour itself). Pick the largest component.
  std::vector<int> component(background.size(), -1);
  std::vector<std::size_t> sizes;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (background[i] || component[i] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      std::size_t size = 0;
      std::vector<std::pair<int, int>> todo{{x, y}};
      component[i] = id;
      static constexpr int kStep[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      while (!todo.empty()) {
        const auto [cx, cy] = todo.back();
        todo.pop_back();
        ++size;
        for (const auto& d : kStep) {
          const int nx = cx + d[0], ny = cy + d[1];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
          if (!background[j] && component[j] < 0) {
            component[j] = id;
            todo.emplace_back(nx, ny);
          }
        }
      }
      sizes.push_back(size);
    }

  if (sizes.empty())
    throw ExtractionFailed("no enclosed region found (" + std::to_string(w) +
                           "x" + std::to_string(h) + " image)");

  const int best = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  ForegroundMask mask;
  mask.width = w;
  mask.height = h;
  mask.member.resize(background.size());
  for (std::size_t i = 0; i < background.size(); ++i)
    mask.member[i] = component[i] == best ? 1 : 0;
  return mask;
}

}  // namespace grading
