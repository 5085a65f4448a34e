#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scribeforge::metrics {

/// Unit-cost edit distance over any random-access sequences with == comparable elements.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    row[j] = j;
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t up = row[j];
      const std::size_t substitute = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, substitute});
      diag = up;
    }
  }
  return row[n];
}

struct EvalPair {
  std::string pred;  // UTF-8
  std::string truth; // UTF-8
};

struct EvalReport {
  double cer = 0.0; // percent
  double wer = 0.0; // percent
  double acc = 0.0; // percent
  std::size_t n = 0;
};

struct EvalOptions {
  bool lowercase = false; // fold both strings before comparing
};

/// Words are maximal runs of non-space characters.
std::vector<std::u32string> split_words(std::u32string_view text);

/// Simple case folding covering Latin, Greek and Cyrillic letters.
std::u32string fold_case(std::u32string_view text);

// All three are micro-averaged over the pairs and reported in percent. They throw
// UndefinedDenominator when the reference lengths (or the pair count) sum to zero.
double cer(std::span<const EvalPair> pairs, const EvalOptions& options = {});
double wer(std::span<const EvalPair> pairs, const EvalOptions& options = {});
double accuracy(std::span<const EvalPair> pairs, const EvalOptions& options = {});

EvalReport evaluate(std::span<const EvalPair> pairs, const EvalOptions& options = {});

} // namespace scribeforge::metrics
