#include "scribeforge/metrics.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/utf8.hpp"

namespace scribeforge::metrics {

std::vector<std::u32string> split_words(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == U' ') {
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && text[i] != U' ') {
      ++i;
    }
    if (i > start) {
      words.emplace_back(text.substr(start, i - start));
    }
  }
  return words;
}

std::u32string fold_case(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& c : out) {
    if ((c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7) || (c >= 0x391 && c <= 0x3AB && c != 0x3A2) ||
        (c >= 0x410 && c <= 0x42F)) {
      c += 0x20;
    } else if (c >= 0x400 && c <= 0x40F) {
      c += 0x50; // Ѐ..Џ -> ѐ..џ
    } else if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 && c != 0x138 && c != 0x149 && c != 0x17F) {
      // Latin Extended-A alternates upper/lower; the parity flips after U+0138 and U+0149.
      const bool shifted = (c > 0x138 && c < 0x149) || c > 0x178;
      const bool upper = shifted ? (c % 2 == 1) : (c % 2 == 0);
      if (upper && c != 0x178) {
        c += 1;
      } else if (c == 0x178) {
        c = 0xFF;
      }
    }
  }
  return out;
}

namespace {

struct Prepared {
  std::u32string pred;
  std::u32string truth;
};

std::vector<Prepared> prepare(std::span<const EvalPair> pairs, const EvalOptions& options) {
  std::vector<Prepared> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    Prepared q{utf8::decode(p.pred), utf8::decode(p.truth)};
    if (options.lowercase) {
      q.pred = fold_case(q.pred);
      q.truth = fold_case(q.truth);
    }
    out.push_back(std::move(q));
  }
  return out;
}

double char_rate(const std::vector<Prepared>& pairs) {
  std::size_t dist = 0, len = 0;
  for (const auto& p : pairs) {
    dist += levenshtein(p.pred, p.truth);
    len += p.truth.size();
  }
  if (len == 0) {
    throw UndefinedDenominator("CER undefined: all reference strings are empty");
  }
  return 100.0 * static_cast<double>(dist) / static_cast<double>(len);
}

double word_rate(const std::vector<Prepared>& pairs) {
  std::size_t dist = 0, len = 0;
  for (const auto& p : pairs) {
    const auto pred = split_words(p.pred);
    const auto truth = split_words(p.truth);
    dist += levenshtein(pred, truth);
    len += truth.size();
  }
  if (len == 0) {
    throw UndefinedDenominator("WER undefined: no reference words");
  }
  return 100.0 * static_cast<double>(dist) / static_cast<double>(len);
}

double exact_rate(const std::vector<Prepared>& pairs) {
  if (pairs.empty()) {
    throw UndefinedDenominator("accuracy undefined: no pairs");
  }
  std::size_t hits = 0;
  for (const auto& p : pairs) {
    hits += p.pred == p.truth ? 1 : 0;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(pairs.size());
}

} // namespace

double cer(std::span<const EvalPair> pairs, const EvalOptions& options) { return char_rate(prepare(pairs, options)); }

double wer(std::span<const EvalPair> pairs, const EvalOptions& options) { return word_rate(prepare(pairs, options)); }

double accuracy(std::span<const EvalPair> pairs, const EvalOptions& options) {
  return exact_rate(prepare(pairs, options));
}

EvalReport evaluate(std::span<const EvalPair> pairs, const EvalOptions& options) {
  const auto prepared = prepare(pairs, options);
  return EvalReport{char_rate(prepared), word_rate(prepared), exact_rate(prepared), prepared.size()};
}

} // namespace scribeforge::metrics
