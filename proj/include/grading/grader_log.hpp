#ifndef GRADING_GRADER_LOG_HPP_
#define GRADING_GRADER_LOG_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "grading/dataset.hpp"

namespace grading {

inline constexpr int kShiftHours = 8;

struct GraderRecord {
  std::string item;
  int hour = 1;  // 1..8
  std::string grader;
  int label = 0;
};

struct GraderLog {
  Task task = Task::tomato;
  std::vector<GraderRecord> records;
};

// CSV with header item,hour,grader,label.
GraderLog load_grader_log(const std::filesystem::path& path, Task task);

struct HourlyCurve {
  // Mean accuracy across graders; hours with no records are NaN.
  std::array<double, kShiftHours> per_hour{};
  double daily_average = 0;  // mean over hours that have records
  int grader_count = 0;
};

// Each grader's hour-1 labels are the benchmark (first-hour performance is
// 100% by definition); later hours score against them. Throws Error when an
// item graded after hour 1 has no hour-1 record from the same grader.
HourlyCurve hourly_accuracy(const GraderLog& log);

}  // namespace grading

#endif  // GRADING_GRADER_LOG_HPP_
