#pragma once

#include "scribeforge/stackmix.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace scribeforge {

// Boundary and fragment-index files share one JSON layout (keys sorted, UTF-8):
//   {"alphabet": "...",
//    "lines": [{"id", "image_path", "width", "spans": [[char, start, end], ...]}, ...],
//    "expressions": {"3": [...], ..., "8": [...]}}     <- index files only
// Line order is preserved; expression lists are sorted.

struct BoundaryDocument {
  Alphabet alphabet;
  std::vector<IndexedLine> lines; // transcript is the spans' text
};

std::string boundaries_to_json(const Alphabet& alphabet, const std::vector<IndexedLine>& lines);
BoundaryDocument boundaries_from_json(const std::string& text);

std::string index_to_json(const FragmentIndex& index, const TokenizerBank& bank);

struct LoadedIndex {
  FragmentIndex index;
  TokenizerBank bank;
};

/// Rebuilds the bank (lexicons from "expressions", atoms from the spans) and the fragment
/// map. probabilities are assigned to lexicons in ascending dimension order.
LoadedIndex index_from_json(const std::string& text,
                            std::span<const double> probabilities = kDefaultTokenizerProbs);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace scribeforge
