#ifndef GRADING_DATASET_HPP_
#define GRADING_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace grading {

enum class Task { tomato, egg };

// USDA ripeness stages in ordinal order; distance between stages is the
// absolute index difference.
enum class TomatoStage {
  green = 0,
  breakers = 1,
  turning = 2,
  pink = 3,
  light_red = 4,
  red = 5,
};

// Accept is the positive class and encodes as 1 (the network's target).
enum class EggGrade { reject = 0, accept = 1 };

inline constexpr int kTomatoClasses = 6;
inline constexpr int kEggClasses = 2;

int class_count(Task task);
const std::string& task_name(Task task);
Task task_from_name(const std::string& name);  // throws DecodeError

// Label values are class indices: tomato 0..5 (stage order), egg 0=Reject,
// 1=Accept. Canonical names are the enum spellings below.
const std::string& label_name(Task task, int label);
int label_from_name(Task task, const std::string& name);  // throws DecodeError

struct ManifestRecord {
  std::string id;
  std::filesystem::path path;
  int label = 0;
  std::string grader;  // empty when absent
  int hour = 0;        // 0 when absent, else 1..8
};

struct Manifest {
  Task task = Task::tomato;
  std::vector<ManifestRecord> records;
};

// CSV with header id,path,label,grader,hour. Relative image paths are
// resolved against the manifest's directory. Rejects duplicate ids and
// labels that are not valid for the task.
Manifest load_manifest(const std::filesystem::path& path, Task task);
void save_manifest(const std::filesystem::path& path, const Manifest& m);

struct SplitSpec {
  int train_per_class = 0;
  int test_per_class = 0;
  int validation_per_class = 0;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Manifest train;
  Manifest test;
  Manifest validation;
};

// Deterministic stratified split: per class, ids are sorted, shuffled with
// the spec seed and dealt into train/test/validation. Output is therefore
// invariant under permutation of the manifest rows. Throws Error when a
// class has fewer records than the spec requests.
SplitResult stratified_split(const Manifest& m, const SplitSpec& spec);

}  // namespace grading

#endif  // GRADING_DATASET_HPP_
