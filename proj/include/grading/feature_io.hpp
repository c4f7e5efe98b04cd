#ifndef GRADING_FEATURE_IO_HPP_
#define GRADING_FEATURE_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "grading/dataset.hpp"
#include "grading/spectral.hpp"

namespace grading {

struct FeatureRecord {
  std::string id;
  int label = 0;
  SpectralPattern pattern;
};

struct FeatureFile {
  Task task = Task::tomato;
  std::vector<FeatureRecord> records;
};

// Text format, one record per line: id,label,v0,...,v767. Values are written
// in shortest round-trip decimal form, so a write/read cycle reproduces the
// binary64 pattern exactly. '#' lines carry the task tag and provenance.
void write_feature_file(const std::filesystem::path& path, Task task,
                        const std::vector<FeatureRecord>& records,
                        const std::string& config_echo = "");

FeatureFile read_feature_file(const std::filesystem::path& path);

}  // namespace grading

#endif  // GRADING_FEATURE_IO_HPP_
