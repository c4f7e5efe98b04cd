#include "grading/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "grading/error.hpp"
#include "grading/image.hpp"
#include "grading/rng.hpp"

namespace grading {

namespace {

struct Color {
  double r, g, b;
};

Color lerp(const Color& a, const Color& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

Color tomato_color(int stage) {
  const Color green{58, 150, 60};
  const Color red{200, 40, 36};
  return lerp(green, red, stage / 5.0);
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct Blemish {
  double cx, cy, radius;
};

// Fraction of the pixel covered by the ellipse, 4x4 supersampled.
double ellipse_coverage(double px, double py, double cx, double cy, double rx,
                        double ry) {
  int inside = 0;
  for (int sy = 0; sy < 4; ++sy)
    for (int sx = 0; sx < 4; ++sx) {
      const double x = px + (sx + 0.5) / 4.0;
      const double y = py + (sy + 0.5) / 4.0;
      const double u = (x - cx) / rx;
      const double v = (y - cy) / ry;
      if (u * u + v * v <= 1.0) ++inside;
    }
  return inside / 16.0;
}

RgbImage render_item(Task task, int label, double noise, int size, Rng& rng) {
  const double cx = size / 2.0 + rng.uniform(-3.0, 3.0);
  const double cy = size / 2.0 + rng.uniform(-3.0, 3.0);
  double rx, ry;
  if (task == Task::tomato) {
    rx = rng.uniform(0.28, 0.34) * size;
    ry = rng.uniform(0.26, 0.32) * size;
  } else {
    rx = rng.uniform(0.24, 0.28) * size;  // eggs are narrower than tall
    ry = rng.uniform(0.30, 0.35) * size;
  }

  const Color body = task == Task::tomato
                         ? tomato_color(label)
                         : Color{226, 205, 172};
  const Color background{28, 32, 44};
  const Color blemish_color{70, 45, 35};

  std::vector<Blemish> blemishes;
  if (task == Task::egg && label == static_cast<int>(EggGrade::reject)) {
    const int n = 6 + rng.uniform_int(0, 5);
    for (int i = 0; i < n; ++i) {
      // keep speckles well inside the shell
      const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      const double dist = std::sqrt(rng.uniform()) * 0.7;
      blemishes.push_back({cx + std::cos(angle) * dist * rx,
                           cy + std::sin(angle) * dist * ry,
                           rng.uniform(1.5, 3.5)});
    }
  }

  RgbImage img = make_image(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double tex = rng.uniform(-6.0, 6.0);
      Color c{background.r + tex, background.g + tex, background.b + tex};

      const double alpha = ellipse_coverage(x, y, cx, cy, rx, ry);
      if (alpha > 0) {
        Color p = body;
        for (const auto& bl : blemishes) {
          const double dx = x + 0.5 - bl.cx;
          const double dy = y + 0.5 - bl.cy;
          const double d = std::sqrt(dx * dx + dy * dy);
          // soft-edged speckle
          const double k = std::clamp(bl.radius + 0.8 - d, 0.0, 1.0);
          if (k > 0) p = lerp(p, blemish_color, k);
        }
        if (noise > 0) {
          p.r += rng.normal() * noise;
          p.g += rng.normal() * noise;
          p.b += rng.normal() * noise;
        }
        c = lerp(c, p, alpha);
      }
      img.at(x, y) = {to_byte(c.r), to_byte(c.g), to_byte(c.b)};
    }
  return img;
}

}  // namespace

Manifest synth_generate(const SynthConfig& config) {
  if (config.per_class <= 0) throw Error("per_class must be positive");
  std::filesystem::create_directories(config.out_dir);

  Manifest manifest;
  manifest.task = config.task;
  const int classes = class_count(config.task);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < config.per_class; ++i) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(c),
                          static_cast<std::uint64_t>(i)));
      const RgbImage img =
          render_item(config.task, c, config.noise, config.image_size, rng);

      std::ostringstream name;
      name << task_name(config.task) << "_" << label_name(config.task, c)
           << "_" << i << ".png";
      save_png(config.out_dir / name.str(), img);

      ManifestRecord rec;
      rec.id = name.str().substr(0, name.str().size() - 4);
      rec.path = config.out_dir / name.str();
      rec.label = c;
      manifest.records.push_back(std::move(rec));
    }
  }

  // manifest paths are written relative to the manifest location
  Manifest to_save = manifest;
  for (auto& rec : to_save.records) rec.path = rec.path.filename();
  save_manifest(config.out_dir / "manifest.csv", to_save);
  return manifest;
}

}  // namespace grading
