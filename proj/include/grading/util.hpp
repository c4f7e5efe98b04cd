#ifndef GRADING_UTIL_HPP_
#define GRADING_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace grading {

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// Shortest decimal form that parses back to the same binary64 value.
std::string format_double(double value);

double parse_double(std::string_view text);  // throws DecodeError
long parse_long(std::string_view text);      // throws DecodeError

// Plain comma split, no quoting; fields in this project never contain commas.
std::vector<std::string> split_csv(std::string_view line);

// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// Callers get determinism by indexing results, not by completion order.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace grading

#endif  // GRADING_UTIL_HPP_
