#include "grading/dataset.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "grading/error.hpp"
#include "grading/rng.hpp"
#include "grading/util.hpp"

namespace grading {

namespace {

const std::array<std::string, kTomatoClasses> kStageNames = {
    "Green", "Breakers", "Turning", "Pink", "LightRed", "Red"};
const std::array<std::string, kEggClasses> kGradeNames = {"Reject", "Accept"};
const std::array<std::string, 2> kTaskNames = {"tomato", "egg"};

}  // namespace

int class_count(Task task) {
  return task == Task::tomato ? kTomatoClasses : kEggClasses;
}

const std::string& task_name(Task task) {
  return kTaskNames[task == Task::tomato ? 0 : 1];
}

Task task_from_name(const std::string& name) {
  if (name == "tomato") return Task::tomato;
  if (name == "egg") return Task::egg;
  throw DecodeError("unknown task '" + name + "'");
}

const std::string& label_name(Task task, int label) {
  if (label < 0 || label >= class_count(task))
    throw Error("label index " + std::to_string(label) + " out of range for " +
                task_name(task));
  return task == Task::tomato ? kStageNames[label] : kGradeNames[label];
}

int label_from_name(Task task, const std::string& name) {
  const auto find = [&](const auto& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  };
  // "Light Red" appears in manually edited manifests; accept it as well.
  const int idx = task == Task::tomato
                      ? find(kStageNames)
                      : find(kGradeNames);
  if (idx >= 0) return idx;
  if (task == Task::tomato && name == "Light Red")
    return static_cast<int>(TomatoStage::light_red);
  throw DecodeError("unknown " + task_name(task) + " label '" + name + "'");
}

Manifest load_manifest(const std::filesystem::path& path, Task task) {
  const std::string content = read_file(path);
  const std::filesystem::path base = path.parent_path();

  Manifest m;
  m.task = task;
  std::set<std::string> seen;

  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      header_done = true;  // first data-bearing line is the header
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() < 3)
      throw ParseError(path.string(), line_no, "expected id,path,label[,grader,hour]");

    ManifestRecord rec;
    rec.id = f[0];
    if (rec.id.empty()) throw ParseError(path.string(), line_no, "empty id");
    if (!seen.insert(rec.id).second)
      throw ParseError(path.string(), line_no, "duplicate id '" + rec.id + "'");

    std::filesystem::path p = f[1];
    rec.path = p.is_absolute() || base.empty() ? p : base / p;
    try {
      rec.label = label_from_name(task, f[2]);
    } catch (const DecodeError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    if (f.size() > 3) rec.grader = f[3];
    if (f.size() > 4 && !f[4].empty()) {
      long hour = 0;
      try {
        hour = parse_long(f[4]);
      } catch (const DecodeError&) {
        throw ParseError(path.string(), line_no, "bad hour '" + f[4] + "'");
      }
      if (hour < 1 || hour > 8)
        throw ParseError(path.string(), line_no,
                         "hour must be 1..8, got " + std::to_string(hour));
      rec.hour = static_cast<int>(hour);
    }
    m.records.push_back(std::move(rec));
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ostringstream out;
  out << "id,path,label,grader,hour\n";
  for (const auto& rec : m.records) {
    out << rec.id << "," << rec.path.generic_string() << ","
        << label_name(m.task, rec.label) << "," << rec.grader << ",";
    if (rec.hour > 0) out << rec.hour;
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

SplitResult stratified_split(const Manifest& m, const SplitSpec& spec) {
  if (spec.train_per_class < 0 || spec.test_per_class < 0 ||
      spec.validation_per_class < 0)
    throw Error("split counts must be non-negative");

  std::map<std::string, const ManifestRecord*> by_id;
  std::vector<std::vector<std::string>> ids_per_class(class_count(m.task));
  for (const auto& rec : m.records) {
    if (!by_id.emplace(rec.id, &rec).second)
      throw Error("duplicate id '" + rec.id + "' in manifest");
    ids_per_class[rec.label].push_back(rec.id);
  }

  const int want =
      spec.train_per_class + spec.test_per_class + spec.validation_per_class;
  SplitResult result;
  result.train.task = result.test.task = result.validation.task = m.task;

  for (int c = 0; c < class_count(m.task); ++c) {
    auto& ids = ids_per_class[c];
    if (static_cast<int>(ids.size()) < want)
      throw Error("class " + label_name(m.task, c) + " has " +
                  std::to_string(ids.size()) + " records, split needs " +
                  std::to_string(want));
    std::sort(ids.begin(), ids.end());

    // Fisher-Yates with the project Rng, keyed on (seed, class).
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
    for (std::size_t i = ids.size(); i > 1; --i)
      std::swap(ids[i - 1], ids[rng.uniform_int(0, static_cast<int>(i) - 1)]);

    int next = 0;
    for (int i = 0; i < spec.train_per_class; ++i)
      result.train.records.push_back(*by_id.at(ids[next++]));
    for (int i = 0; i < spec.test_per_class; ++i)
      result.test.records.push_back(*by_id.at(ids[next++]));
    for (int i = 0; i < spec.validation_per_class; ++i)
      result.validation.records.push_back(*by_id.at(ids[next++]));
  }
  return result;
}

}  // namespace grading
