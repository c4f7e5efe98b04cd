#include "grading/feature_io.hpp"

#include <sstream>

#include "grading/error.hpp"
#include "grading/util.hpp"

namespace grading {

void write_feature_file(const std::filesystem::path& path, Task task,
                        const std::vector<FeatureRecord>& records,
                        const std::string& config_echo) {
  std::ostringstream out;
  out << "# grading-features v1\n";
  out << "# task=" << task_name(task) << "\n";
  if (!config_echo.empty()) out << "# config=" << config_echo << "\n";
  for (const auto& rec : records) {
    out << rec.id << "," << label_name(task, rec.label);
    for (const double v : rec.pattern.values) out << "," << format_double(v);
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

FeatureFile read_feature_file(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::istringstream in(content);

  FeatureFile file;
  bool task_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string prefix = "# task=";
      if (line.rfind(prefix, 0) == 0) {
        try {
          file.task = task_from_name(line.substr(prefix.size()));
        } catch (const DecodeError& e) {
          throw ParseError(path.string(), line_no, e.what());
        }
        task_seen = true;
      }
      continue;
    }
    if (!task_seen)
      throw ParseError(path.string(), line_no,
                       "feature data before '# task=' header");

    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 2 + SpectralPattern::kSize)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(2 + SpectralPattern::kSize) +
                           " fields, got " + std::to_string(f.size()));
    FeatureRecord rec;
    rec.id = f[0];
    try {
      rec.label = label_from_name(file.task, f[1]);
      for (int i = 0; i < SpectralPattern::kSize; ++i)
        rec.pattern.values[i] = parse_double(f[2 + i]);
    } catch (const DecodeError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    file.records.push_back(std::move(rec));
  }
  return file;
}

}  // namespace grading
