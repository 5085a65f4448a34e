#include "scribeforge/ctc_align.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scribeforge {

Alphabet::Alphabet(std::u32string symbols) : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second) {
      throw InvalidArgument("alphabet has duplicate symbol '" + utf8::encode(symbols_[i]) + "'");
    }
  }
}

Alphabet Alphabet::from_utf8(std::string_view symbols) { return Alphabet(utf8::decode(symbols)); }

std::optional<std::size_t> Alphabet::index_of(char32_t c) const {
  auto it = index_.find(c);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string Alphabet::to_utf8() const { return utf8::encode(symbols_); }

PosteriorMatrix::PosteriorMatrix(std::size_t frames, std::size_t columns, std::vector<float> values)
    : frames_(frames), columns_(columns), values_(std::move(values)) {
  if (columns_ < 1) {
    throw InvalidArgument("posterior matrix needs at least the blank column");
  }
  if (values_.size() != frames_ * columns_) {
    throw InvalidArgument("posterior matrix size mismatch");
  }
  for (std::size_t t = 0; t < frames_; ++t) {
    double sum = 0.0;
    for (std::size_t c = 0; c < columns_; ++c) {
      const float v = values_[t * columns_ + c];
      if (!(v >= 0.0f) || !std::isfinite(v)) {
        throw InvalidArgument("posterior frame " + std::to_string(t) + " has a negative or non-finite value");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-3) {
      throw InvalidArgument("posterior frame " + std::to_string(t) + " sums to " + std::to_string(sum) +
                            ", expected 1 within 1e-3");
    }
  }
}

std::u32string BoundarySet::text() const {
  std::u32string out;
  out.reserve(spans.size());
  for (const auto& s : spans) {
    out.push_back(s.character);
  }
  return out;
}

std::size_t min_frames_for(std::u32string_view transcript) {
  std::size_t n = transcript.size();
  for (std::size_t i = 1; i < transcript.size(); ++i) {
    if (transcript[i] == transcript[i - 1]) {
      ++n;
    }
  }
  return n;
}

namespace {

double safe_log(float p) { return p > 0.0f ? std::log(static_cast<double>(p)) : kLogZeroFloor; }

} // namespace

Alignment forced_align(const PosteriorMatrix& posteriors, std::u32string_view transcript, const Alphabet& alphabet) {
  if (transcript.empty()) {
    throw InvalidTranscript("empty transcript cannot be aligned");
  }
  if (posteriors.columns() != alphabet.size() + 1) {
    throw InvalidArgument("posterior has " + std::to_string(posteriors.columns()) + " columns, alphabet needs " +
                          std::to_string(alphabet.size() + 1));
  }
  const std::size_t blank = alphabet.blank_index();
  const std::size_t n_ext = 2 * transcript.size() + 1;
  std::vector<std::size_t> column(n_ext, blank);
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    auto idx = alphabet.index_of(transcript[i]);
    if (!idx) {
      throw InvalidTranscript("character '" + utf8::encode(transcript[i]) + "' is not in the alphabet");
    }
    column[2 * i + 1] = *idx;
  }
  const std::size_t T = posteriors.frames();
  const std::size_t needed = min_frames_for(transcript);
  if (T < needed) {
    throw AlignmentInfeasible("transcript needs at least " + std::to_string(needed) + " frames, posterior has " +
                              std::to_string(T));
  }

  constexpr double kUnreachable = -std::numeric_limits<double>::infinity();
  // back[t * n_ext + s] = number of positions advanced to reach s at frame t (0, 1 or 2).
  std::vector<std::uint8_t> back(T * n_ext, 0);
  std::vector<double> prev(n_ext, kUnreachable);
  std::vector<double> cur(n_ext, kUnreachable);

  prev[0] = safe_log(posteriors.at(0, column[0]));
  prev[1] = safe_log(posteriors.at(0, column[1]));

  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t s = 0; s < n_ext; ++s) {
      double best = prev[s];
      std::uint8_t step = 0;
      if (s >= 1 && prev[s - 1] > best) {
        best = prev[s - 1];
        step = 1;
      }
      const bool skip_ok = s >= 2 && (s % 2 == 1) && column[s] != column[s - 2];
      if (skip_ok && prev[s - 2] > best) {
        best = prev[s - 2];
        step = 2;
      }
      cur[s] = best == kUnreachable ? kUnreachable : best + safe_log(posteriors.at(t, column[s]));
      back[t * n_ext + s] = step;
    }
    std::swap(prev, cur);
  }

  std::size_t state = n_ext - 2;
  if (prev[n_ext - 1] > prev[n_ext - 2]) {
    state = n_ext - 1;
  }
  Alignment out;
  out.log_score = prev[state];
  out.states.resize(T);
  for (std::size_t t = T; t-- > 0;) {
    out.states[t] = state;
    if (t > 0) {
      state -= back[t * n_ext + state];
    }
  }
  return out;
}

std::vector<SymbolSpan> frames_to_pixels(const std::vector<std::size_t>& states, std::u32string_view transcript,
                                         std::size_t frames, int width) {
  const std::size_t L = transcript.size();
  if (states.size() != frames) {
    throw InvalidArgument("frames_to_pixels: assignment length differs from frame count");
  }
  if (L == 0) {
    return {};
  }
  if (width < static_cast<int>(L)) {
    throw InvalidArgument("frames_to_pixels: width " + std::to_string(width) + " is smaller than transcript length " +
                          std::to_string(L));
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> first(L, kNone);
  std::vector<std::size_t> last(L, kNone);
  for (std::size_t t = 0; t < states.size(); ++t) {
    const std::size_t s = states[t];
    if (s % 2 == 1) {
      const std::size_t i = s / 2;
      if (i >= L) {
        throw InvalidArgument("frames_to_pixels: state beyond transcript");
      }
      if (first[i] == kNone) {
        first[i] = t;
      }
      last[i] = t;
    }
  }
  for (std::size_t i = 0; i < L; ++i) {
    if (first[i] == kNone) {
      throw InvalidArgument("frames_to_pixels: character " + std::to_string(i) + " has no frames");
    }
  }

  const auto W = static_cast<long long>(width);
  const auto T = static_cast<long long>(frames);
  // Boundary between character i-1 and i, at the midpoint of the blank gap (in half frames):
  // floor((last[i-1] + 1 + first[i]) * W / (2T)). Without a gap this is first[i] * W / T.
  std::vector<int> cut(L + 1);
  cut[0] = 0;
  cut[L] = width;
  for (std::size_t i = 1; i < L; ++i) {
    const auto half_frames = static_cast<long long>(last[i - 1] + 1 + first[i]);
    cut[i] = static_cast<int>(half_frames * W / (2 * T));
  }
  // Keep every span non-empty when frames outnumber pixels.
  for (std::size_t i = 1; i < L; ++i) {
    cut[i] = std::max(cut[i], cut[i - 1] + 1);
  }
  for (std::size_t i = L - 1; i >= 1; --i) {
    cut[i] = std::min(cut[i], cut[i + 1] - 1);
  }

  std::vector<SymbolSpan> spans(L);
  for (std::size_t i = 0; i < L; ++i) {
    spans[i] = SymbolSpan{transcript[i], cut[i], cut[i + 1]};
  }
  return spans;
}

BoundarySet extract_boundaries(const PosteriorMatrix& posteriors, std::u32string_view transcript,
                               const Alphabet& alphabet, int width, std::string line_id) {
  const Alignment alignment = forced_align(posteriors, transcript, alphabet);
  BoundarySet out;
  out.line_id = std::move(line_id);
  out.width = width;
  out.spans = frames_to_pixels(alignment.states, transcript, posteriors.frames(), width);
  return out;
}

std::string validate_boundaries(const BoundarySet& boundaries, std::u32string_view transcript) {
  if (boundaries.text() != transcript) {
    return "span characters '" + utf8::encode(boundaries.text()) + "' do not spell transcript '" +
           utf8::encode(transcript) + "'";
  }
  int previous_end = 0;
  for (std::size_t i = 0; i < boundaries.spans.size(); ++i) {
    const auto& s = boundaries.spans[i];
    if (s.start_px < previous_end) {
      return "span " + std::to_string(i) + " starts at " + std::to_string(s.start_px) +
             ", overlapping the previous span ending at " + std::to_string(previous_end);
    }
    if (s.end_px <= s.start_px) {
      return "span " + std::to_string(i) + " is empty";
    }
    if (s.end_px > boundaries.width) {
      return "span " + std::to_string(i) + " ends at " + std::to_string(s.end_px) + ", beyond width " +
             std::to_string(boundaries.width);
    }
    previous_end = s.end_px;
  }
  return {};
}

bool spans_tile_width(const BoundarySet& boundaries) {
  int expected = 0;
  for (const auto& s : boundaries.spans) {
    if (s.start_px != expected || s.end_px <= s.start_px) {
      return false;
    }
    expected = s.end_px;
  }
  return expected == boundaries.width;
}

} // namespace scribeforge
