#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scribeforge {

// Precondition violations on arguments (zero sizes, out-of-range fractions, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed files: bad magic bytes, truncated payloads, unparsable JSON/TSV.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The posterior matrix has too few frames for the transcript.
class AlignmentInfeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Transcript contains a character outside the alphabet (or is empty).
class InvalidTranscript : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CorruptBoundary : public std::runtime_error {
public:
  CorruptBoundary(std::string line_id, const std::string& what)
      : std::runtime_error("corrupt boundary for line '" + line_id + "': " + what),
        line_id_(std::move(line_id)) {}
  const std::string& line_id() const noexcept { return line_id_; }

private:
  std::string line_id_;
};

class UnsynthesizableLine : public std::runtime_error {
public:
  UnsynthesizableLine(std::u32string missing, const std::string& what)
      : std::runtime_error(what), missing_(std::move(missing)) {}
  // Characters with no fragment in the index, in first-occurrence order.
  const std::u32string& missing() const noexcept { return missing_; }

private:
  std::u32string missing_;
};

// Metric denominators that sum to zero.
class UndefinedDenominator : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace scribeforge
