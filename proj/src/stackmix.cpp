#include "scribeforge/stackmix.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/image_io.hpp"
#include "scribeforge/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scribeforge {

bool MweLexicon::contains(std::u32string_view expr) const {
  return expressions.find(std::u32string(expr)) != expressions.end();
}

void TokenizerBank::validate() const {
  if (lexicons.empty() || lexicons.size() != probabilities.size()) {
    throw InvalidArgument("tokenizer bank needs one probability per lexicon");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      throw InvalidArgument("tokenizer bank probabilities must be non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("tokenizer bank probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::size_t TokenizerBank::draw(RngState& rng) const {
  const double u = rng.uniform_real();
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) {
      return i;
    }
  }
  // Rounding can leave u just above the accumulated total; fall to the last non-zero entry.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) {
      return i;
    }
  }
  return probabilities.size() - 1;
}

int TokenizerBank::max_dim() const {
  int d = 1;
  for (const auto& lex : lexicons) {
    d = std::max(d, lex.max_dim);
  }
  return d;
}

bool TokenizerBank::has_expression(std::u32string_view expr) const {
  return std::any_of(lexicons.begin(), lexicons.end(), [&](const MweLexicon& lex) { return lex.contains(expr); });
}

TokenizerBank build_mwe_lexicons(std::span<const std::u32string> transcripts, std::span<const int> dims,
                                 std::span<const double> probabilities) {
  if (transcripts.empty()) {
    throw InvalidArgument("build_mwe_lexicons: no transcripts");
  }
  if (dims.size() != probabilities.size()) {
    throw InvalidArgument("build_mwe_lexicons: dims and probabilities differ in length");
  }
  TokenizerBank bank;
  int widest = 1;
  for (int d : dims) {
    if (d < 2) {
      throw InvalidArgument("build_mwe_lexicons: token dimension must be >= 2");
    }
    widest = std::max(widest, d);
    bank.lexicons.push_back(MweLexicon{d, {}});
  }
  bank.probabilities.assign(probabilities.begin(), probabilities.end());
  bank.validate();

  std::set<std::u32string> ngrams;
  for (const auto& text : transcripts) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      bank.atoms.insert(text[i]);
      for (std::size_t n = 2; n <= static_cast<std::size_t>(widest) && i + n <= text.size(); ++n) {
        ngrams.insert(text.substr(i, n));
      }
    }
  }
  for (auto& lex : bank.lexicons) {
    for (const auto& g : ngrams) {
      if (g.size() <= static_cast<std::size_t>(lex.max_dim)) {
        lex.expressions.insert(lex.expressions.end(), g);
      }
    }
  }
  return bank;
}

std::vector<std::u32string> tokenize(std::u32string_view text, const MweLexicon& lexicon) {
  std::vector<std::u32string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t take = 1;
    const std::size_t longest = std::min<std::size_t>(static_cast<std::size_t>(std::max(lexicon.max_dim, 1)),
                                                      text.size() - i);
    for (std::size_t n = longest; n >= 2; --n) {
      if (lexicon.contains(text.substr(i, n))) {
        take = n;
        break;
      }
    }
    tokens.emplace_back(text.substr(i, take));
    i += take;
  }
  return tokens;
}

FragmentIndex::FragmentIndex(Alphabet alphabet, std::vector<IndexedLine> lines,
                             std::map<std::u32string, std::vector<Fragment>> fragments)
    : alphabet_(std::move(alphabet)), lines_(std::move(lines)), fragments_(std::move(fragments)) {}

std::span<const Fragment> FragmentIndex::find(std::u32string_view token) const {
  auto it = fragments_.find(std::u32string(token));
  if (it == fragments_.end()) {
    return {};
  }
  return it->second;
}

bool FragmentIndex::has_atom(char32_t c) const { return !find(std::u32string_view(&c, 1)).empty(); }

std::u32string FragmentIndex::token_of(const Fragment& fragment) const {
  const auto& spans = lines_[fragment.line].boundaries.spans;
  std::u32string out;
  for (std::uint32_t k = 0; k < fragment.length; ++k) {
    out.push_back(spans[fragment.first_char + k].character);
  }
  return out;
}

FragmentIndex build_fragment_index(std::vector<IndexedLine> lines, const TokenizerBank& bank,
                                   const Alphabet& alphabet) {
  std::map<std::u32string, std::vector<Fragment>> fragments;
  const auto widest = static_cast<std::size_t>(bank.max_dim());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& line = lines[li];
    if (const auto problem = validate_boundaries(line.boundaries, line.transcript); !problem.empty()) {
      throw CorruptBoundary(line.id, problem);
    }
    const auto& spans = line.boundaries.spans;
    const std::u32string& text = line.transcript;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!alphabet.contains(text[i])) {
        throw CorruptBoundary(line.id, "character '" + utf8::encode(text[i]) + "' is not in the alphabet");
      }
      for (std::size_t n = 1; n <= widest && i + n <= text.size(); ++n) {
        const std::u32string token = text.substr(i, n);
        if (n > 1 && !bank.has_expression(token)) {
          continue;
        }
        fragments[token].push_back(Fragment{static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(n), spans[i].start_px,
                                            spans[i + n - 1].end_px});
      }
    }
  }
  return FragmentIndex(alphabet, std::move(lines), std::move(fragments));
}

FileImageStore::FileImageStore(std::filesystem::path base_dir, bool cache)
    : base_dir_(std::move(base_dir)), cache_(cache) {}

std::shared_ptr<const RasterImage> FileImageStore::load(const IndexedLine& line) const {
  if (cache_) {
    std::lock_guard lock(mutex_);
    if (auto it = images_.find(line.id); it != images_.end()) {
      return it->second;
    }
  }
  std::filesystem::path path(line.image_path);
  if (path.is_relative() && !base_dir_.empty()) {
    path = base_dir_ / path;
  }
  auto image = std::make_shared<const RasterImage>(load_image(path));
  if (cache_) {
    std::lock_guard lock(mutex_);
    images_.emplace(line.id, image);
  }
  return image;
}

void MemoryImageStore::add(const std::string& line_id, RasterImage image) {
  images_[line_id] = std::make_shared<const RasterImage>(std::move(image));
}

std::shared_ptr<const RasterImage> MemoryImageStore::load(const IndexedLine& line) const {
  auto it = images_.find(line.id);
  if (it == images_.end()) {
    throw InvalidArgument("no image for line '" + line.id + "'");
  }
  return it->second;
}

RasterImage cut_fragment(const FragmentIndex& index, const Fragment& fragment, const ImageStore& store) {
  const auto& line = index.line_of(fragment);
  const auto image = store.load(line);
  int x0 = fragment.start_px;
  int x1 = fragment.end_px;
  if (line.boundaries.width > 0 && image->width() != line.boundaries.width) {
    const double scale = static_cast<double>(image->width()) / line.boundaries.width;
    x0 = static_cast<int>(std::floor(x0 * scale));
    x1 = std::max(x0 + 1, static_cast<int>(std::floor(x1 * scale)));
  }
  x1 = std::min(x1, image->width());
  x0 = std::min(x0, x1 - 1);
  return image->crop_columns(x0, x1);
}

CorpusFilterResult filter_corpus(std::span<const std::string> lines, const Alphabet& alphabet) {
  CorpusFilterResult result;
  for (const auto& raw : lines) {
    std::string_view view(raw);
    while (!view.empty() && (view.back() == '\n' || view.back() == '\r')) {
      view.remove_suffix(1);
    }
    std::u32string text;
    try {
      text = utf8::decode(view);
    } catch (const FormatError&) {
      ++result.dropped;
      continue;
    }
    const bool ok = !text.empty() &&
                    std::all_of(text.begin(), text.end(), [&](char32_t c) { return alphabet.contains(c); });
    if (ok) {
      result.kept.push_back(std::move(text));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

std::u32string missing_characters(std::u32string_view text, const FragmentIndex& index) {
  std::u32string missing;
  for (char32_t c : text) {
    if (!index.has_atom(c) && missing.find(c) == std::u32string::npos) {
      missing.push_back(c);
    }
  }
  return missing;
}

SynthesisResult synthesize_line(std::u32string_view text, const FragmentIndex& index, const TokenizerBank& bank,
                                const ImageStore& store, RngState& rng, const SynthesisOptions& options) {
  if (text.empty()) {
    throw InvalidArgument("synthesize_line: empty text");
  }
  if (options.target_height < 1) {
    throw InvalidArgument("synthesize_line: target height must be positive");
  }
  if (const auto missing = missing_characters(text, index); !missing.empty()) {
    throw UnsynthesizableLine(missing, "no fragments for characters '" + utf8::encode(missing) + "'");
  }

  SynthesisResult result{RasterImage::blank(1, 1), std::u32string(text), {}, 0};
  std::vector<std::u32string> tokens;
  if (options.per_character) {
    for (char32_t c : text) {
      tokens.emplace_back(1, c);
    }
  } else {
    result.lexicon = bank.draw(rng);
    tokens = tokenize(text, bank.lexicons[result.lexicon]);
  }

  std::vector<RasterImage> pieces;
  auto place = [&](const std::u32string& token, std::span<const Fragment> candidates) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1));
    const Fragment& f = candidates[k];
    pieces.push_back(cut_fragment(index, f, store));
    result.provenance.push_back(ProvenanceEntry{token, index.line_of(f).id, f.start_px, f.end_px});
  };
  for (const auto& token : tokens) {
    const auto candidates = index.find(token);
    if (!candidates.empty()) {
      place(token, candidates);
      continue;
    }
    // No fragment for the merged token: fall back to its characters.
    for (char32_t c : token) {
      const std::u32string atom(1, c);
      place(atom, index.find(atom));
    }
  }
  result.image = hstack(pieces, options.target_height);
  return result;
}

RasterImage synthesize_page(std::span<const std::u32string> texts, const FragmentIndex& index,
                            const TokenizerBank& bank, const ImageStore& store, RngState& rng, int target_height,
                            int gap) {
  if (texts.empty()) {
    throw InvalidArgument("synthesize_page: no texts");
  }
  std::vector<RasterImage> lines;
  lines.reserve(texts.size());
  SynthesisOptions options;
  options.target_height = target_height;
  for (const auto& text : texts) {
    lines.push_back(synthesize_line(text, index, bank, store, rng, options).image);
  }
  return vstack(lines, gap);
}

} // namespace scribeforge
