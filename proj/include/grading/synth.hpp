#ifndef GRADING_SYNTH_HPP_
#define GRADING_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include "grading/dataset.hpp"

namespace grading {

// Synthetic produce corpus: one anti-aliased ellipse per image on a darker
// textured field. Tomato classes interpolate the body color from green to
// red across the six stages; egg rejects carry dark blemish speckles.
// `noise` is the per-channel Gaussian sigma (0-255 scale) applied to produce
// pixels: low noise keeps the classes separable, high noise makes neighboring
// stages overlap. Byte-identical output for identical configs.
struct SynthConfig {
  Task task = Task::tomato;
  int per_class = 10;
  double noise = 3.0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int image_size = 96;
};

// Renders the corpus PNGs into out_dir, writes out_dir/manifest.csv and
// returns the manifest.
Manifest synth_generate(const SynthConfig& config);

}  // namespace grading

#endif  // GRADING_SYNTH_HPP_
