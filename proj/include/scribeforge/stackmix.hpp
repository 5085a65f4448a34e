#pragma once

#include "scribeforge/ctc_align.hpp"
#include "scribeforge/raster.hpp"
#include "scribeforge/rng.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace scribeforge {

/// Character n-grams (2..max_dim) harvested from training transcripts.
struct MweLexicon {
  int max_dim = 0;
  std::set<std::u32string> expressions;

  bool contains(std::u32string_view expr) const;
};

inline constexpr std::array<int, 6> kDefaultTokenizerDims = {3, 4, 5, 6, 7, 8};
inline constexpr std::array<double, 6> kDefaultTokenizerProbs = {0.05, 0.15, 0.2, 0.2, 0.2, 0.2};

/// One lexicon per dimension, drawn with fixed probabilities per synthesized line.
struct TokenizerBank {
  std::vector<MweLexicon> lexicons;
  std::vector<double> probabilities;
  std::set<char32_t> atoms;

  /// Throws InvalidArgument unless probabilities match lexicons and sum to 1.
  void validate() const;
  std::size_t draw(RngState& rng) const;
  int max_dim() const;
  bool has_expression(std::u32string_view expr) const;
};

TokenizerBank build_mwe_lexicons(std::span<const std::u32string> transcripts,
                                 std::span<const int> dims = kDefaultTokenizerDims,
                                 std::span<const double> probabilities = kDefaultTokenizerProbs);

/// Greedy left-to-right longest match; unmatched positions yield single characters.
std::vector<std::u32string> tokenize(std::u32string_view text, const MweLexicon& lexicon);

/// A training line as the fragment index sees it. image_path may be empty for in-memory stores.
struct IndexedLine {
  std::string id;
  std::string image_path;
  std::u32string transcript;
  BoundarySet boundaries;
};

/// Image slice for one token occurrence. The token text is the index key it is filed under.
struct Fragment {
  std::uint32_t line = 0;       // position in FragmentIndex::lines()
  std::uint32_t first_char = 0; // first span covered
  std::uint32_t length = 0;     // number of spans covered
  int start_px = 0;
  int end_px = 0;

  bool operator==(const Fragment&) const = default;
};

class FragmentIndex {
public:
  FragmentIndex() = default;
  FragmentIndex(Alphabet alphabet, std::vector<IndexedLine> lines,
                std::map<std::u32string, std::vector<Fragment>> fragments);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<IndexedLine>& lines() const noexcept { return lines_; }
  const std::map<std::u32string, std::vector<Fragment>>& entries() const noexcept { return fragments_; }

  /// Empty span when the token has no fragment.
  std::span<const Fragment> find(std::u32string_view token) const;
  bool has_atom(char32_t c) const;
  std::u32string token_of(const Fragment& fragment) const;
  const IndexedLine& line_of(const Fragment& fragment) const { return lines_[fragment.line]; }

private:
  Alphabet alphabet_;
  std::vector<IndexedLine> lines_;
  std::map<std::u32string, std::vector<Fragment>> fragments_;
};

/// Indexes every character and every lexicon expression occurring in each line.
/// Throws CorruptBoundary (naming the line) when spans are malformed or do not spell the transcript.
FragmentIndex build_fragment_index(std::vector<IndexedLine> lines, const TokenizerBank& bank,
                                   const Alphabet& alphabet);

/// Source of line images referenced by an index. Implementations must allow concurrent reads.
class ImageStore {
public:
  virtual ~ImageStore() = default;
  virtual std::shared_ptr<const RasterImage> load(const IndexedLine& line) const = 0;
};

/// Reads images from disk on first use and keeps them. Relative paths resolve against base_dir.
class FileImageStore final : public ImageStore {
public:
  explicit FileImageStore(std::filesystem::path base_dir = {}, bool cache = true);
  std::shared_ptr<const RasterImage> load(const IndexedLine& line) const override;

private:
  std::filesystem::path base_dir_;
  bool cache_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::shared_ptr<const RasterImage>> images_;
};

class MemoryImageStore final : public ImageStore {
public:
  void add(const std::string& line_id, RasterImage image);
  std::shared_ptr<const RasterImage> load(const IndexedLine& line) const override;

private:
  std::unordered_map<std::string, std::shared_ptr<const RasterImage>> images_;
};

/// Full-height slice of the source image. Spans are rescaled if the stored image width
/// differs from the width the boundaries were computed for.
RasterImage cut_fragment(const FragmentIndex& index, const Fragment& fragment, const ImageStore& store);

struct CorpusFilterResult {
  std::vector<std::u32string> kept;
  std::size_t dropped = 0;
};

/// Keeps non-empty lines (trailing CR/LF trimmed) made only of alphabet symbols, in order.
CorpusFilterResult filter_corpus(std::span<const std::string> lines, const Alphabet& alphabet);

struct ProvenanceEntry {
  std::u32string token;
  std::string line_id;
  int start_px = 0;
  int end_px = 0;
};

struct SynthesisResult {
  RasterImage image;
  std::u32string label;
  std::vector<ProvenanceEntry> provenance;
  std::size_t lexicon = 0; // which bank lexicon tokenized the text
};

struct SynthesisOptions {
  int target_height = kCanonicalLineHeight;
  bool per_character = false; // bypass the bank, one token per character
};

/// Throws UnsynthesizableLine listing characters that have no fragment.
SynthesisResult synthesize_line(std::u32string_view text, const FragmentIndex& index, const TokenizerBank& bank,
                                const ImageStore& store, RngState& rng, const SynthesisOptions& options = {});

/// Characters of text with no fragment in the index, first occurrences only.
std::u32string missing_characters(std::u32string_view text, const FragmentIndex& index);

RasterImage synthesize_page(std::span<const std::u32string> texts, const FragmentIndex& index,
                            const TokenizerBank& bank, const ImageStore& store, RngState& rng, int target_height,
                            int gap);

} // namespace scribeforge
