#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "grading/error.hpp"
#include "grading/feature_io.hpp"
#include "grading/spectral.hpp"
#include "grading/util.hpp"

using namespace grading;

namespace {

ForegroundMask full_mask(int w, int h) {
  ForegroundMask mask;
  mask.width = w;
  mask.height = h;
  mask.member.assign(static_cast<std::size_t>(w) * h, 1);
  return mask;
}

ForegroundMask random_mask(int w, int h, Rng& rng) {
  ForegroundMask mask;
  mask.width = w;
  mask.height = h;
  mask.member.resize(static_cast<std::size_t>(w) * h);
  for (auto& m : mask.member) m = rng.bernoulli(0.5) ? 1 : 0;
  mask.member[0] = 1;  // never empty
  return mask;
}

// Independent oracle: per channel, enumerate intensities and count matching
// foreground pixels one value at a time.
SpectralPattern brute_force_pattern(const RgbImage& img,
                                    const ForegroundMask& mask) {
  std::size_t total = 0;
  for (const auto m : mask.member)
    if (m) ++total;

  SpectralPattern p;
  for (int v = 0; v < 256; ++v) {
    std::size_t r = 0, g = 0, b = 0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      if (!mask.member[i]) continue;
      if (img.pixels[i].r == v) ++r;
      if (img.pixels[i].g == v) ++g;
      if (img.pixels[i].b == v) ++b;
    }
    p.values[SpectralPattern::kRedOffset + v] = static_cast<double>(r) / total;
    p.values[SpectralPattern::kGreenOffset + v] = static_cast<double>(g) / total;
    p.values[SpectralPattern::kBlueOffset + v] = static_cast<double>(b) / total;
  }
  return p;
}

}  // namespace

TEST_CASE("uniform foreground concentrates each channel in one bin") {
  RgbImage img = make_image(10, 5, {10, 20, 30});
  const SpectralPattern p = extract_spectral_pattern(img, full_mask(10, 5));
  for (int i = 0; i < SpectralPattern::kSize; ++i) {
    if (i == 10 || i == 276 || i == 542)
      CHECK(p.values[i] == 1.0);
    else
      CHECK(p.values[i] == 0.0);
  }
}

TEST_CASE("half black half white splits each channel 50/50") {
  RgbImage img = make_image(8, 2, {0, 0, 0});
  for (int x = 0; x < 8; ++x) img.at(x, 1) = {255, 255, 255};
  const SpectralPattern p = extract_spectral_pattern(img, full_mask(8, 2));
  for (const int offset : {SpectralPattern::kRedOffset,
                           SpectralPattern::kGreenOffset,
                           SpectralPattern::kBlueOffset}) {
    CHECK(p.values[offset + 0] == 0.5);
    CHECK(p.values[offset + 255] == 0.5);
  }
}

TEST_CASE("pattern equals the brute-force tally exactly") {
  Rng rng(101);
  const RgbImage img = fixtures::random_image(50, 50, rng);
  const ForegroundMask mask = random_mask(50, 50, rng);
  const SpectralPattern fast = extract_spectral_pattern(img, mask);
  const SpectralPattern slow = brute_force_pattern(img, mask);
  for (int i = 0; i < SpectralPattern::kSize; ++i)
    CHECK(fast.values[i] == slow.values[i]);
}

TEST_CASE("channel blocks sum to one and ignore the background") {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = rng.uniform_int(2, 24), h = rng.uniform_int(2, 24);
    RgbImage img = fixtures::random_image(w, h, rng);
    const ForegroundMask mask = random_mask(w, h, rng);
    const SpectralPattern p = extract_spectral_pattern(img, mask);

    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(p.channel_sum(c) - 1.0) <= 1e-9);

    // permuting pixel positions (mask permuted alongside) changes nothing
    RgbImage shuffled = img;
    ForegroundMask shuffled_mask = mask;
    for (std::size_t i = shuffled.pixels.size(); i > 1; --i) {
      const auto j =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
      std::swap(shuffled.pixels[i - 1], shuffled.pixels[j]);
      std::swap(shuffled_mask.member[i - 1], shuffled_mask.member[j]);
    }
    const SpectralPattern p2 = extract_spectral_pattern(shuffled, shuffled_mask);
    CHECK(p2.values == p.values);

    // rewriting background pixels changes nothing
    RgbImage edited = img;
    for (std::size_t i = 0; i < edited.pixels.size(); ++i)
      if (!mask.member[i])
        edited.pixels[i] = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                            static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                            static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
    const SpectralPattern p3 = extract_spectral_pattern(edited, mask);
    CHECK(p3.values == p.values);
  }
}

TEST_CASE("empty mask and dimension mismatch are errors") {
  const RgbImage img = make_image(4, 4);
  ForegroundMask empty = full_mask(4, 4);
  std::fill(empty.member.begin(), empty.member.end(), 0);
  CHECK_THROWS_AS(extract_spectral_pattern(img, empty), Error);
  CHECK_THROWS_AS(extract_spectral_pattern(img, full_mask(5, 4)), Error);
}

TEST_CASE("feature file round-trips patterns bit-exactly") {
  const auto dir = fixtures::temp_dir("features_io");
  Rng rng(303);

  std::vector<FeatureRecord> records;
  for (int i = 0; i < 5; ++i) {
    FeatureRecord rec;
    rec.id = "item_" + std::to_string(i);
    rec.label = i % kTomatoClasses;
    const RgbImage img = fixtures::random_image(12, 12, rng);
    rec.pattern = extract_spectral_pattern(img, full_mask(12, 12));
    records.push_back(std::move(rec));
  }

  const auto path = dir / "features.csv";
  write_feature_file(path, Task::tomato, records, "{\"note\":1}");
  const FeatureFile back = read_feature_file(path);
  CHECK(back.task == Task::tomato);
  REQUIRE(back.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back.records[i].id == records[i].id);
    CHECK(back.records[i].label == records[i].label);
    CHECK(back.records[i].pattern.values == records[i].pattern.values);
  }
}

TEST_CASE("feature file parse errors carry line numbers") {
  const auto dir = fixtures::temp_dir("features_bad");
  write_file_atomic(dir / "bad.csv",
                    "# grading-features v1\n# task=egg\nid1,Accept,0.5\n");
  try {
    read_feature_file(dir / "bad.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  write_file_atomic(dir / "no_task.csv", "id1,Accept,0.5\n");
  CHECK_THROWS_AS(read_feature_file(dir / "no_task.csv"), ParseError);
}
