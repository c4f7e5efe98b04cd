#include "grading/grader_log.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "grading/error.hpp"
#include "grading/util.hpp"

namespace grading {

GraderLog load_grader_log(const std::filesystem::path& path, Task task) {
  const std::string content = read_file(path);
  GraderLog log;
  log.task = task;

  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      header_done = true;
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 4)
      throw ParseError(path.string(), line_no, "expected item,hour,grader,label");
    GraderRecord rec;
    rec.item = f[0];
    long hour = 0;
    try {
      hour = parse_long(f[1]);
      rec.label = label_from_name(task, f[3]);
    } catch (const DecodeError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    if (hour < 1 || hour > kShiftHours)
      throw ParseError(path.string(), line_no,
                       "hour must be 1.." + std::to_string(kShiftHours));
    rec.hour = static_cast<int>(hour);
    rec.grader = f[2];
    if (rec.grader.empty())
      throw ParseError(path.string(), line_no, "empty grader id");
    log.records.push_back(std::move(rec));
  }
  return log;
}

HourlyCurve hourly_accuracy(const GraderLog& log) {
  if (log.records.empty()) throw Error("empty grader log");

  // benchmark[grader][item] = the hour-1 label
  std::map<std::string, std::map<std::string, int>> benchmark;
  for (const auto& rec : log.records)
    if (rec.hour == 1) benchmark[rec.grader][rec.item] = rec.label;

  // per grader, per hour: (matches, total)
  struct Tally {
    long match = 0;
    long total = 0;
  };
  std::map<std::string, std::array<Tally, kShiftHours>> tallies;
  for (const auto& rec : log.records) {
    const auto grader_it = benchmark.find(rec.grader);
    if (grader_it == benchmark.end())
      throw Error("grader '" + rec.grader + "' has no hour-1 records");
    const auto item_it = grader_it->second.find(rec.item);
    if (item_it == grader_it->second.end())
      throw Error("item '" + rec.item + "' graded by '" + rec.grader +
                  "' at hour " + std::to_string(rec.hour) +
                  " has no hour-1 benchmark");
    Tally& t = tallies[rec.grader][rec.hour - 1];
    ++t.total;
    if (rec.label == item_it->second) ++t.match;
  }

  HourlyCurve curve;
  curve.grader_count = static_cast<int>(tallies.size());
  double day_sum = 0;
  int day_hours = 0;
  for (int h = 0; h < kShiftHours; ++h) {
    double sum = 0;
    int graders = 0;
    for (const auto& [grader, hours] : tallies) {
      if (hours[h].total == 0) continue;
      sum += static_cast<double>(hours[h].match) /
             static_cast<double>(hours[h].total);
      ++graders;
    }
    if (graders > 0) {
      curve.per_hour[h] = sum / graders;
      day_sum += curve.per_hour[h];
      ++day_hours;
    } else {
      curve.per_hour[h] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  curve.daily_average = day_hours > 0 ? day_sum / day_hours : 0.0;
  return curve;
}

}  // namespace grading
