// Writes the bundled toy dataset: line images drawn with a 5x7 bitmap font, the exact
// character boundaries used to draw them, synthetic CTC posteriors consistent with those
// boundaries, a line manifest and a small text corpus. Output is fully determined by the seed.

#include "scribeforge/ctc_align.hpp"
#include "scribeforge/image_io.hpp"
#include "scribeforge/index_io.hpp"
#include "scribeforge/manifest.hpp"
#include "scribeforge/posterior_io.hpp"
#include "scribeforge/rng.hpp"
#include "scribeforge/utf8.hpp"

#include <CLI11.hpp>

#include <array>
#include <iostream>
#include <map>
#include <string>

namespace sf = scribeforge;
namespace fs = std::filesystem;

namespace {

using Glyph = std::array<const char*, 7>;

const std::map<char, Glyph>& font() {
  static const std::map<char, Glyph> glyphs = {
      {'a', {".....", ".....", ".###.", "....#", ".####", "#...#", ".####"}},
      {'b', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####."}},
      {'c', {".....", ".....", ".####", "#....", "#....", "#....", ".####"}},
      {'d', {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####"}},
      {'e', {".....", ".....", ".###.", "#...#", "#####", "#....", ".###."}},
      {'f', {"..##.", ".#...", "####.", ".#...", ".#...", ".#...", ".#..."}},
      {'g', {".....", ".####", "#...#", "#...#", ".####", "....#", ".###."}},
      {'h', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#"}},
      {'i', {"..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###."}},
      {'j', {"...#.", ".....", "..##.", "...#.", "...#.", "#..#.", ".##.."}},
      {'k', {"#....", "#....", "#..#.", "#.#..", "##...", "#.#..", "#..#."}},
      {'l', {".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
      {'m', {".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#"}},
      {'n', {".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#"}},
      {'o', {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###."}},
      {'p', {".....", "####.", "#...#", "#...#", "####.", "#....", "#...."}},
      {'q', {".....", ".####", "#...#", "#...#", ".####", "....#", "....#"}},
      {'r', {".....", ".....", "#.##.", "##..#", "#....", "#....", "#...."}},
      {'s', {".....", ".....", ".####", "#....", ".###.", "....#", "####."}},
      {'t', {".#...", ".#...", "####.", ".#...", ".#...", ".#..#", "..##."}},
      {'u', {".....", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#"}},
      {'v', {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
      {'w', {".....", ".....", "#...#", "#...#", "#.#.#", "#.#.#", ".#.#."}},
      {'x', {".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#"}},
      {'y', {".....", "#...#", "#...#", "#...#", ".####", "....#", ".###."}},
      {'z', {".....", ".....", "#####", "...#.", "..#..", ".#...", "#####"}},
      {'.', {".....", ".....", ".....", ".....", ".....", ".##..", ".##.."}},
      {',', {".....", ".....", ".....", ".....", ".##..", "..#..", ".#..."}},
  };
  return glyphs;
}

constexpr int kWidth = 512;
constexpr int kHeight = 128;
constexpr int kScaleX = 4;
constexpr int kScaleY = 6;
constexpr int kGlyphW = 5 * kScaleX;
constexpr int kGap = 4;
constexpr int kSpaceAdvance = 16;
constexpr int kFrames = 128;
constexpr int kMaxChars = 20;
const std::string kAlphabet = " ,.abcdefghijklmnopqrstuvwxyz";

const std::vector<std::string> kSeedLines = {
    "the quick brown fox", "jumps over a lazy dog", "pack my box with", "five dozen jugs.", "quiz of jazz, wave",
};

const std::vector<std::string> kWords = {
    "the",  "and",   "of",   "to",   "in",    "it",    "was",   "for",  "on",   "with", "his",  "her",
    "they", "said",  "from", "had",  "not",   "but",   "what",  "all",  "were", "when", "there", "can",
    "an",   "your",  "which", "one",  "would", "time",  "out",   "up",   "more", "some", "them", "into",
    "like", "him",   "see",  "now",  "could", "door",  "owl",   "road", "cat",  "mind", "grey", "house",
    "drill", "quite", "jump", "box",  "lazy",  "fox",   "zero",  "quiz", "jazz", "wave", "keep", "view"};

struct Line {
  std::string text;
  sf::RasterImage image;
  sf::BoundarySet truth;
  std::vector<std::pair<int, int>> cores; // per character, pixel range whose frames favor it
};

Line render(const std::string& id, const std::string& text, sf::RngState& rng) {
  Line line{text, sf::RasterImage::blank(kWidth, kHeight), {}, {}};
  line.truth.line_id = id;
  line.truth.width = kWidth;
  const int ink_base = static_cast<int>(rng.uniform_int(0, 60));
  const int top = 36 + static_cast<int>(rng.uniform_int(-6, 6));
  int x = 10 + static_cast<int>(rng.uniform_int(0, 8));

  std::vector<int> starts, ends;
  for (char c : text) {
    const int advance = c == ' ' ? kSpaceAdvance : kGlyphW;
    if (c != ' ') {
      const Glyph& g = font().at(c);
      for (int gy = 0; gy < 7; ++gy) {
        for (int gx = 0; gx < 5; ++gx) {
          if (g[static_cast<std::size_t>(gy)][gx] != '#') {
            continue;
          }
          for (int dy = 0; dy < kScaleY; ++dy) {
            for (int dx = 0; dx < kScaleX; ++dx) {
              const int v = ink_base + static_cast<int>(rng.uniform_int(0, 30));
              line.image.set(x + gx * kScaleX + dx, top + gy * kScaleY + dy, static_cast<sf::Luminance>(v));
            }
          }
        }
      }
    }
    starts.push_back(x);
    ends.push_back(x + advance);
    line.cores.emplace_back(x + advance / 4, x + advance - advance / 4);
    x += advance + kGap;
  }
  // Ground-truth tiling: cut halfway through each inter-glyph gap.
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int s = i == 0 ? 0 : (ends[i - 1] + starts[i]) / 2;
    const int e = i + 1 == text.size() ? kWidth : (ends[i] + starts[i + 1]) / 2;
    line.truth.spans.push_back(sf::SymbolSpan{static_cast<char32_t>(text[i]), s, e});
  }
  return line;
}

sf::PosteriorMatrix posteriors_for(const Line& line, const sf::Alphabet& alphabet) {
  const std::size_t columns = alphabet.size() + 1;
  std::vector<float> values(kFrames * columns);
  const double px_per_frame = static_cast<double>(kWidth) / kFrames;
  for (std::size_t t = 0; t < kFrames; ++t) {
    const double center = (static_cast<double>(t) + 0.5) * px_per_frame;
    std::size_t hot = alphabet.blank_index();
    for (std::size_t i = 0; i < line.cores.size(); ++i) {
      if (center >= line.cores[i].first && center < line.cores[i].second) {
        hot = *alphabet.index_of(static_cast<char32_t>(line.text[i]));
      }
    }
    const float rest = 0.1f / static_cast<float>(columns - 1);
    for (std::size_t c = 0; c < columns; ++c) {
      values[t * columns + c] = c == hot ? 0.9f : rest;
    }
  }
  return sf::PosteriorMatrix(kFrames, columns, std::move(values));
}

std::string random_words(sf::RngState& rng, std::size_t max_len, int max_words) {
  std::string out;
  const int n = static_cast<int>(rng.uniform_int(2, max_words));
  for (int k = 0; k < n; ++k) {
    const auto& w = kWords[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(kWords.size()) - 1))];
    const std::size_t extra = out.empty() ? w.size() : w.size() + 1;
    if (out.size() + extra > max_len) {
      break;
    }
    out += out.empty() ? w : " " + w;
  }
  if (out.empty()) {
    out = "the end";
  }
  if (out.size() + 1 <= max_len && rng.bernoulli(0.2)) {
    out += rng.bernoulli(0.5) ? "." : ",";
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled toy dataset"};
  std::string out = "data/toy";
  std::uint64_t seed = 20211;
  int n_lines = 20;
  int n_corpus = 200;
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--lines", n_lines, "Number of line images");
  app.add_option("--corpus", n_corpus, "Number of corpus lines");
  CLI11_PARSE(app, argc, argv);

  const fs::path root(out);
  fs::create_directories(root / "images");
  fs::create_directories(root / "posteriors");
  const sf::Alphabet alphabet = sf::Alphabet::from_utf8(kAlphabet);
  sf::RngState rng(seed);

  sf::DatasetManifest manifest;
  std::vector<sf::IndexedLine> truth;
  for (int i = 0; i < n_lines; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "line_%02d", i);
    const std::string text = static_cast<std::size_t>(i) < kSeedLines.size()
                                 ? kSeedLines[static_cast<std::size_t>(i)]
                                 : random_words(rng, kMaxChars, 5);
    Line line = render(id, text, rng);
    const std::string image_rel = std::string("images/") + id + ".png";
    sf::save_image(line.image, root / image_rel);
    sf::write_posterior_file(root / "posteriors" / (std::string(id) + ".ctcp"), posteriors_for(line, alphabet),
                             alphabet);
    manifest.records.push_back(sf::ManifestRecord{id, image_rel, text, "train", {}});
    truth.push_back(sf::IndexedLine{id, image_rel, sf::utf8::decode(text), line.truth});
  }
  sf::write_manifest(root / "manifest.tsv", manifest);
  sf::write_text_file(root / "boundaries_truth.json", sf::boundaries_to_json(alphabet, truth));

  std::string corpus;
  for (int i = 0; i < n_corpus; ++i) {
    if (i % 25 == 24) {
      // Out-of-alphabet lines the corpus filter must drop.
      corpus += "Chapter " + std::to_string(i / 25 + 1) + "\n";
      continue;
    }
    corpus += random_words(rng, 40, 8) + "\n";
  }
  sf::write_text_file(root / "corpus.txt", corpus);
  std::cout << "wrote " << n_lines << " lines and " << n_corpus << " corpus lines to " << root.string() << "\n";
  return 0;
}
