#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scribeforge {

/// Ordered recognizer symbols. The CTC blank is implicit and occupies column size().
class Alphabet {
public:
  Alphabet() = default;
  /// Throws InvalidArgument on duplicate symbols.
  explicit Alphabet(std::u32string symbols);
  static Alphabet from_utf8(std::string_view symbols);

  const std::u32string& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::size_t blank_index() const noexcept { return symbols_.size(); }
  std::optional<std::size_t> index_of(char32_t c) const;
  bool contains(char32_t c) const { return index_.contains(c); }
  std::string to_utf8() const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
  std::u32string symbols_;
  std::unordered_map<char32_t, std::size_t> index_;
};

/// Per-frame probabilities, T rows by (|alphabet| + 1) columns, blank last.
class PosteriorMatrix {
public:
  /// Validates shape, non-negativity and that each row sums to 1 within 1e-3.
  PosteriorMatrix(std::size_t frames, std::size_t columns, std::vector<float> values);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t columns() const noexcept { return columns_; }
  float at(std::size_t t, std::size_t c) const { return values_[t * columns_ + c]; }
  const std::vector<float>& values() const noexcept { return values_; }

private:
  std::size_t frames_;
  std::size_t columns_;
  std::vector<float> values_;
};

struct SymbolSpan {
  char32_t character = 0;
  int start_px = 0; // inclusive
  int end_px = 0;   // exclusive

  bool operator==(const SymbolSpan&) const = default;
};

struct BoundarySet {
  std::string line_id;
  int width = 0;
  std::vector<SymbolSpan> spans;

  std::u32string text() const;
  bool operator==(const BoundarySet&) const = default;
};

/// Viterbi path through the CTC lattice over (blank, c1, blank, ..., cL, blank).
/// states[t] is the extended-label position occupied at frame t; odd positions are characters.
struct Alignment {
  std::vector<std::size_t> states;
  double log_score = 0.0;
};

// Log-probability used for exact zeros, keeps arithmetic free of NaN.
inline constexpr double kLogZeroFloor = -1e30;

/// Minimum frame count for a transcript: its length plus the number of adjacent repeats.
std::size_t min_frames_for(std::u32string_view transcript);

/// Throws InvalidTranscript for empty transcripts or characters outside the alphabet, and
/// AlignmentInfeasible when there are too few frames. Ties prefer stay, then +1, then +2;
/// at the final frame a path ending on the last character wins ties over the trailing blank.
Alignment forced_align(const PosteriorMatrix& posteriors, std::u32string_view transcript, const Alphabet& alphabet);

/// Maps an alignment onto pixel spans that tile [0, width). Blank runs between characters are
/// split at their midpoint; leading and trailing blanks go to the first and last character.
std::vector<SymbolSpan> frames_to_pixels(const std::vector<std::size_t>& states, std::u32string_view transcript,
                                         std::size_t frames, int width);

BoundarySet extract_boundaries(const PosteriorMatrix& posteriors, std::u32string_view transcript,
                               const Alphabet& alphabet, int width, std::string line_id);

/// Checks that spans spell transcript, are ordered, non-empty, non-overlapping and inside the width.
/// Returns an empty string when valid, otherwise a description of the first violation.
std::string validate_boundaries(const BoundarySet& boundaries, std::u32string_view transcript);

/// True when the spans cover [0, width) contiguously with no gaps.
bool spans_tile_width(const BoundarySet& boundaries);

} // namespace scribeforge
