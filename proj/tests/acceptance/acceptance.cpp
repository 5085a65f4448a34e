// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any line fails.

#include "scribeforge/bezier.hpp"
#include "scribeforge/blot.hpp"
#include "scribeforge/ctc_align.hpp"
#include "scribeforge/errors.hpp"
#include "scribeforge/image_io.hpp"
#include "scribeforge/index_io.hpp"
#include "scribeforge/manifest.hpp"
#include "scribeforge/metrics.hpp"
#include "scribeforge/stackmix.hpp"
#include "scribeforge/utf8.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace scribeforge;
namespace fs = std::filesystem;

#ifndef SCRIBEFORGE_CLI_PATH
#define SCRIBEFORGE_CLI_PATH "scribeforge"
#endif

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && secs >= limit_seconds) {
    o.ok = false;
    o.detail = "over the time limit";
  }
  failures += o.ok ? 0 : 1;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, limit_seconds);
  std::cout << (o.ok ? "PASS " : "FAIL ") << name << " [" << timing << "] " << o.detail << std::endl;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- Bezier -------------------------------------------------------------------------------

Outcome partition_of_unity() {
  Outcome o;
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (int i = 0; i <= 1000; ++i) {
      const double s = i / 1000.0;
      double sum = 0.0;
      for (int j = 0; j <= n; ++j) {
        sum += bernstein(j, n, s);
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  o.require(worst < 1e-12, "max deviation " + fmt(worst));
  if (o.ok) {
    o.detail = "max deviation " + fmt(worst) + " over n<=20, 1001 grid points";
  }
  return o;
}

Outcome bezier_invariants() {
  Outcome o;
  RngState rng(1001);
  for (int trial = 0; trial < 1000 && o.ok; ++trial) {
    std::vector<Point2> pts(static_cast<std::size_t>(rng.uniform_int(2, 20)));
    for (auto& p : pts) {
      p = Point2{rng.uniform_real(-500, 500), rng.uniform_real(-500, 500)};
    }
    const ControlPolygon poly(pts);
    const auto a = bezier_point(poly, 0.0);
    const auto b = bezier_point(poly, 1.0);
    o.require(std::abs(a.x - pts.front().x) < 1e-12 && std::abs(a.y - pts.front().y) < 1e-12, "start endpoint");
    o.require(std::abs(b.x - pts.back().x) < 1e-12 && std::abs(b.y - pts.back().y) < 1e-12, "end endpoint");
    const auto hull = oracle::convex_hull(pts);
    for (const auto& p : sample_curve(poly, 101)) {
      o.require(oracle::in_hull(hull, p, 1e-9), "sample outside the control hull");
    }
    const double k = rng.uniform_real(0.1, 10.0);
    const Point2 shift{rng.uniform_real(-100, 100), rng.uniform_real(-100, 100)};
    std::vector<Point2> moved;
    for (const auto& p : pts) {
      moved.push_back(Point2{k * p.x + shift.x, k * p.y + shift.y});
    }
    const double s = rng.uniform_real();
    const auto m = bezier_point(ControlPolygon(moved), s);
    const auto base = bezier_point(poly, s);
    // Relative tolerance: coordinates reach ~5000 after scaling.
    const double scale = std::max(1.0, std::abs(k * base.x + shift.x) + std::abs(k * base.y + shift.y));
    o.require(std::abs(m.x - (k * base.x + shift.x)) < 1e-9 * scale &&
                  std::abs(m.y - (k * base.y + shift.y)) < 1e-9 * scale,
              "affine invariance");
  }

  // Stroke pixel sets against the brute-force distance test.
  const int w = 256;
  const int h = 64;
  std::size_t compared = 0;
  for (int trial = 0; trial < 100 && o.ok; ++trial) {
    std::vector<Point2> pts(static_cast<std::size_t>(rng.uniform_int(2, 12)));
    for (auto& p : pts) {
      p = Point2{rng.uniform_real(-20, w + 20), rng.uniform_real(-20, h + 20)};
    }
    const auto path = sample_curve(ControlPolygon(pts), 60);
    const double thickness = rng.uniform_real(1.0, 7.0);
    const auto got = stroke_coverage(w, h, path, thickness);
    const auto want = oracle::stroke_pixels(w, h, path, thickness);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (want[i] != 2) {
        o.require(got[i] == want[i], "stroke pixel mismatch in trial " + std::to_string(trial));
        ++compared;
      }
    }
  }
  if (o.ok) {
    o.detail = "1000 curve trials, " + std::to_string(compared) + " stroke pixels matched on 64x256";
  }
  return o;
}

// ---- Blots --------------------------------------------------------------------------------

Outcome blot_properties() {
  Outcome o;
  RngState src(2001);
  const auto line = testing::inked_line(src, 2048, 128);
  const BlotConfig defaults;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngState a(seed);
    RngState b(seed);
    o.require(encode_png(apply_handwritten_blots(line, defaults, a)) ==
                  encode_png(apply_handwritten_blots(line, defaults, b)),
              "seed " + std::to_string(seed) + " is not reproducible");
  }

  const auto small = testing::inked_line(src, 256, 128);
  RngState mc(2002);
  int applied = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    applied += apply_handwritten_blots_traced(small, defaults, mc).applied ? 1 : 0;
  }
  const double frac = applied / static_cast<double>(trials);
  o.require(std::abs(frac - 0.5) <= 0.02, "applied fraction " + fmt(frac));

  RngState meta(2003);
  for (int trial = 0; trial < 200 && o.ok; ++trial) {
    BlotConfig cfg;
    cfg.proba = 1.0;
    cfg.min_w = static_cast<int>(meta.uniform_int(1, 40));
    cfg.max_w = cfg.min_w + static_cast<int>(meta.uniform_int(0, 40));
    cfg.min_h = static_cast<int>(meta.uniform_int(1, 80));
    cfg.max_h = cfg.min_h + static_cast<int>(meta.uniform_int(0, 60));
    cfg.incline = static_cast<int>(meta.uniform_int(0, 25));
    cfg.intensity = meta.uniform_real();
    cfg.transparency = meta.uniform_real();
    cfg.thickness = meta.uniform_real(1.0, 8.0);
    cfg.count_min = static_cast<int>(meta.uniform_int(1, 5));
    cfg.count_max = cfg.count_min + static_cast<int>(meta.uniform_int(0, 6));
    const auto img = testing::inked_line(meta, static_cast<int>(meta.uniform_int(64, 512)), 128);
    RngState rng(meta.next_u64());
    const auto out = apply_handwritten_blots_traced(img, cfg, rng);
    o.require(static_cast<int>(out.regions.size()) >= cfg.count_min &&
                  static_cast<int>(out.regions.size()) <= cfg.count_max,
              "region count outside the configured range");
    const double margin = cfg.thickness / 2.0 + cfg.incline;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        o.require(out.image.at(x, y) <= img.at(x, y), "a blot lightened a pixel");
        bool near = false;
        for (const auto& r : out.regions) {
          near = near || (x >= r.x - margin && x <= r.x + r.w + margin && y >= r.y - margin && y <= r.y + r.h + margin);
        }
        if (!near) {
          o.require(out.image.at(x, y) == img.at(x, y), "pixel changed outside every region");
        }
      }
    }
  }
  if (o.ok) {
    o.detail = "20 seeds reproducible; applied fraction " + fmt(frac) + " over 10000; locality on 200 configs";
  }
  return o;
}

// ---- CTC ----------------------------------------------------------------------------------

Outcome ctc_equivalence() {
  Outcome o;
  const auto alphabet = Alphabet::from_utf8("abc");
  RngState rng(3001);
  std::size_t cases = 0;
  std::size_t unique = 0;
  double worst = 0.0;
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t frames = 1; frames <= 8; ++frames) {
      for (int draw = 0; draw < 100 && o.ok; ++draw) {
        std::u32string text;
        for (std::size_t i = 0; i < len; ++i) {
          text += alphabet.symbols()[static_cast<std::size_t>(rng.uniform_int(0, 2))];
        }
        std::vector<float> v(frames * 4);
        for (std::size_t t = 0; t < frames; ++t) {
          double row[4];
          double sum = 0.0;
          for (double& x : row) {
            x = (draw % 4 == 0 && rng.bernoulli(0.3)) ? 0.0 : rng.uniform_real(0.01, 1.0);
            sum += x;
          }
          if (sum == 0.0) {
            row[3] = sum = 1.0;
          }
          for (std::size_t c = 0; c < 4; ++c) {
            v[t * 4 + c] = static_cast<float>(row[c] / sum);
          }
        }
        const PosteriorMatrix post(frames, 4, std::move(v));
        if (frames < min_frames_for(text)) {
          bool threw = false;
          try {
            forced_align(post, text, alphabet);
          } catch (const AlignmentInfeasible&) {
            threw = true;
          }
          o.require(threw, "infeasible case accepted");
          o.require(oracle::enumerate_ctc_paths(post, text, alphabet).paths == 0, "oracle found a path");
          continue;
        }
        ++cases;
        const auto al = forced_align(post, text, alphabet);
        const auto brute = oracle::enumerate_ctc_paths(post, text, alphabet);
        const double diff = std::abs(al.log_score - brute.best);
        worst = std::max(worst, diff);
        o.require(diff < 1e-9, "score differs by " + fmt(diff));
        if (brute.second < brute.best - 1e-9) {
          ++unique;
          o.require(al.states == brute.best_path, "arg-max path differs from the unique optimum");
        }
        const int width = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(len), 1000));
        const auto b = extract_boundaries(post, text, alphabet, width, "case");
        o.require(validate_boundaries(b, text).empty() && spans_tile_width(b), "spans do not tile the width");
      }
    }
  }
  if (o.ok) {
    o.detail = std::to_string(cases) + " feasible cases, max score diff " + fmt(worst) + ", " +
               std::to_string(unique) + " unique arg-max paths matched";
  }
  return o;
}

// ---- StackMix -----------------------------------------------------------------------------

Outcome stackmix_reassembly() {
  Outcome o;
  const auto toy = testing::toy_dir();
  const auto truth = boundaries_from_json(read_text_file(toy / "boundaries_truth.json"));
  const IndexedLine* chosen = nullptr;
  for (const auto& line : truth.lines) {
    const std::set<char32_t> distinct(line.transcript.begin(), line.transcript.end());
    if (distinct.size() == line.transcript.size()) {
      chosen = &line;
      break;
    }
  }
  o.require(chosen != nullptr, "no toy line with distinct characters");
  if (!o.ok) {
    return o;
  }
  const std::vector<std::u32string> texts{chosen->transcript};
  const auto bank = build_mwe_lexicons(texts);
  const auto index = build_fragment_index({*chosen}, bank, truth.alphabet);
  FileImageStore store(toy);
  const auto source = store.load(index.lines()[0]);
  RngState rng(4001);
  SynthesisOptions opts;
  opts.target_height = source->height();
  opts.per_character = true;
  const auto out = synthesize_line(chosen->transcript, index, bank, store, rng, opts);
  o.require(out.label == chosen->transcript, "label differs");
  o.require(out.image.width() == source->width(), "width " + std::to_string(out.image.width()) + " vs " +
                                                      std::to_string(source->width()));
  o.require(out.image == *source, "pixels differ from the source line");

  RngState draws(4002);
  std::array<int, 6> counts{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    ++counts[bank.draw(draws)];
  }
  std::string freqs;
  for (std::size_t k = 0; k < 6; ++k) {
    const double f = counts[k] / static_cast<double>(n);
    o.require(std::abs(f - kDefaultTokenizerProbs[k]) <= 0.02, "lexicon " + std::to_string(k) + " drawn at " + fmt(f));
    freqs += (k ? "," : "") + fmt(f);
  }
  if (o.ok) {
    o.detail = "line '" + chosen->id + "' rebuilt exactly (" + std::to_string(source->width()) +
               " px); bank frequencies " + freqs;
  }
  return o;
}

// ---- Metrics ------------------------------------------------------------------------------

Outcome metrics_checks() {
  Outcome o;
  RngState rng(5001);
  const std::u32string pool = U"ab cé";
  for (int i = 0; i < 10000 && o.ok; ++i) {
    std::u32string a;
    std::u32string b;
    for (auto n = rng.uniform_int(0, 12); n > 0; --n) {
      a += pool[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    }
    for (auto n = rng.uniform_int(0, 12); n > 0; --n) {
      b += pool[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    }
    o.require(metrics::levenshtein(a, b) == oracle::levenshtein_table(a, b), "levenshtein differs from the table");
  }
  using metrics::EvalPair;
  const std::vector<EvalPair> cer1{{"ab", "abc"}};
  const std::vector<EvalPair> cer2{{"a", "ab"}, {"cd", "cd"}};
  const std::vector<EvalPair> wer1{{"the cat", "the hat"}};
  const std::vector<EvalPair> wer2{{"a  b", "a b"}};
  const std::vector<EvalPair> acc1{{"a", "a"}, {"b", "c"}};
  const std::vector<EvalPair> caps{{"A", "a"}};
  o.require(std::abs(metrics::cer(cer1) - 100.0 / 3.0) < 1e-9, "cer single pair");
  o.require(std::abs(metrics::cer(cer2) - 25.0) < 1e-9, "cer micro-average");
  o.require(std::abs(metrics::wer(wer1) - 50.0) < 1e-9, "wer substitution");
  o.require(std::abs(metrics::wer(wer2)) < 1e-9, "wer space runs");
  o.require(std::abs(metrics::accuracy(acc1) - 50.0) < 1e-9, "accuracy half");
  o.require(metrics::accuracy(caps) == 0.0, "accuracy must be case sensitive");
  o.require(metrics::accuracy(caps, {true}) == 100.0, "lowercase option");
  if (o.ok) {
    o.detail = "10000 random pairs match the table oracle; worked examples exact to 1e-9; case-sensitive acc";
  }
  return o;
}

// ---- End to end ---------------------------------------------------------------------------

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SCRIBEFORGE_CLI_PATH) + " " + args + " >>" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::uint64_t pipeline(const fs::path& work, Outcome& o) {
  const auto toy = testing::toy_dir();
  const std::string manifest = (toy / "manifest.tsv").string();
  const std::string w = work.string();
  const fs::path log = work / "log.txt";
  const std::string common = " --seed 20211 --strict";
  o.require(run("segment" + common + " --manifest " + manifest + " --posteriors " + (toy / "posteriors").string() +
                    " --out " + w + "/boundaries.json",
                log) == 0,
            "segment failed");
  o.require(run("build-index" + common + " --manifest " + manifest + " --boundaries " + w + "/boundaries.json --out " +
                    w + "/index.json",
                log) == 0,
            "build-index failed");
  o.require(run("synthesize" + common + " --index " + w + "/index.json --corpus " + (toy / "corpus.txt").string() +
                    " --lines 100 --out " + w + "/synth",
                log) == 0,
            "synthesize failed");
  o.require(run("augment" + common + " --manifest " + manifest + " --boundaries " + w + "/boundaries.json --out " + w +
                    "/augment",
                log) == 0,
            "augment failed");
  o.require(run("preview" + common + " --source " + w + "/index.json --out " + w + "/preview.png --samples 8", log) == 0,
            "preview failed");
  if (!o.ok) {
    return 0;
  }
  o.require(read_manifest(work / "synth" / "manifest.tsv").records.size() == 100, "synthesized line count");
  o.require(read_manifest(work / "augment" / "manifest.tsv").records.size() == 20, "augmented line count");

  // Segmentation against the hand-authored boundaries.
  const auto got = boundaries_from_json(read_text_file(work / "boundaries.json"));
  const auto truth = boundaries_from_json(read_text_file(toy / "boundaries_truth.json"));
  o.require(got.lines.size() == truth.lines.size(), "segmented line count");
  int worst = 0;
  for (std::size_t i = 0; i < std::min(got.lines.size(), truth.lines.size()); ++i) {
    const auto& a = got.lines[i].boundaries.spans;
    const auto& b = truth.lines[i].boundaries.spans;
    o.require(a.size() == b.size(), "span count differs from truth");
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      worst = std::max({worst, std::abs(a[k].start_px - b[k].start_px), std::abs(a[k].end_px - b[k].end_px)});
    }
  }
  o.require(worst <= 4, "boundary error " + std::to_string(worst) + " px against truth");
  fs::remove(log);
  return testing::digest_tree(work);
}

Outcome end_to_end() {
  Outcome o;
  testing::TempDir a;
  testing::TempDir b;
  const auto da = pipeline(a.path(), o);
  const auto db = o.ok ? pipeline(b.path(), o) : 0;
  o.require(da == db, "output digests differ between runs");
  if (o.ok) {
    std::ostringstream s;
    s << "segment -> build-index -> synthesize 100 -> augment -> preview twice, digest " << std::hex << da;
    o.detail = s.str();
  }
  return o;
}

} // namespace

int main() {
  criterion("bernstein-partition-of-unity", 5, partition_of_unity);
  criterion("bezier-invariants-and-stroke-oracle", 30, bezier_invariants);
  criterion("blot-determinism-frequency-locality", 60, blot_properties);
  criterion("ctc-viterbi-oracle-equivalence", 60, ctc_equivalence);
  criterion("stackmix-reassembly-and-bank-frequencies", 60, stackmix_reassembly);
  criterion("metrics-oracle-and-worked-examples", 30, metrics_checks);
  criterion("end-to-end-toy-pipeline", 120, end_to_end);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
