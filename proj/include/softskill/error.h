#ifndef SOFTSKILL_ERROR_H_
#define SOFTSKILL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softskill {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, out-of-range matches, empty sequences.
class InputError : public Error {
 public:
  using Error::Error;
};

// A malformed line in a text file. line() is 1-based.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : InputError(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Inconsistent settings: mode mismatches, missing embeddings, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace softskill

#endif  // SOFTSKILL_ERROR_H_
