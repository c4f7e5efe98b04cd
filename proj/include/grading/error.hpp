#ifndef GRADING_ERROR_HPP_
#define GRADING_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace grading {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// File opened but its contents are not a valid instance of the format.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Text-format parse failure; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Background removal found no enclosed region.
class ExtractionFailed : public Error {
 public:
  using Error::Error;
};

// Non-finite values appeared during training.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace grading

#endif  // GRADING_ERROR_HPP_
