#include "scribeforge/commands.hpp"

#include "scribeforge/blot.hpp"
#include "scribeforge/errors.hpp"
#include "scribeforge/image_io.hpp"
#include "scribeforge/index_io.hpp"
#include "scribeforge/manifest.hpp"
#include "scribeforge/metrics.hpp"
#include "scribeforge/parallel.hpp"
#include "scribeforge/posterior_io.hpp"
#include "scribeforge/utf8.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace scribeforge::cli {

using nlohmann::json;

int default_jobs() {
  if (const char* env = std::getenv("SCRIBEFORGE_JOBS"); env != nullptr) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<int>(v);
    }
  }
  return 1;
}

namespace {

class Log {
public:
  explicit Log(std::ostream* os) : os_(os) {}
  template <typename... Args>
  void operator()(const Args&... args) const {
    if (os_ != nullptr) {
      ((*os_) << ... << args) << '\n';
    }
  }

private:
  std::ostream* os_;
};

fs::path relative_to(const fs::path& target, const fs::path& base_dir) {
  const fs::path t = fs::absolute(target).lexically_normal();
  const fs::path b = fs::absolute(base_dir.empty() ? fs::path(".") : base_dir).lexically_normal();
  fs::path r = t.lexically_relative(b);
  return r.empty() ? t : r;
}

fs::path parent_or_cwd(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

std::string safe_file_stem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ':' || c == '\0') {
      c = '_';
    }
  }
  return out;
}

std::string numbered(const char* prefix, std::size_t i) {
  std::ostringstream ss;
  ss << prefix << std::setw(6) << std::setfill('0') << i;
  return ss.str();
}

// Deterministic Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffled_indices(std::size_t n, RngState& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

} // namespace

int cmd_segment(const fs::path& manifest_path, const fs::path& posterior_dir, const fs::path& out_boundaries,
                const CommonOptions& options) {
  const Log log(options.log);
  const DatasetManifest manifest = read_manifest(manifest_path);
  if (manifest.records.empty()) {
    log("warning: manifest '", manifest_path.string(), "' is empty");
  }

  struct Outcome {
    std::optional<IndexedLine> line;
    std::optional<Alphabet> alphabet;
    std::string error;
  };
  std::vector<Outcome> outcomes(manifest.records.size());
  const fs::path out_dir = parent_or_cwd(out_boundaries);

  parallel_for(manifest.records.size(), options.jobs, [&](std::size_t i) {
    const auto& record = manifest.records[i];
    try {
      const fs::path posterior_path = posterior_dir / (record.id + ".ctcp");
      if (!fs::exists(posterior_path)) {
        throw FormatError("missing posterior file '" + posterior_path.string() + "'");
      }
      PosteriorFile pf = read_posterior_file(posterior_path);
      const RasterImage image = load_image(record.resolved_image);
      const std::u32string transcript = utf8::decode(record.transcript);
      BoundarySet bs = extract_boundaries(pf.posteriors, transcript, pf.alphabet, image.width(), record.id);
      outcomes[i].line = IndexedLine{record.id, relative_to(record.resolved_image, out_dir).generic_string(),
                                     transcript, std::move(bs)};
      outcomes[i].alphabet = std::move(pf.alphabet);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  std::optional<Alphabet> alphabet;
  std::vector<IndexedLine> lines;
  json failures = json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    const auto& id = manifest.records[i].id;
    if (o.line && alphabet && !(*o.alphabet == *alphabet)) {
      o.error = "posterior alphabet differs from the first aligned line's alphabet";
      o.line.reset();
    }
    if (!o.line) {
      log("error: line '", id, "': ", o.error);
      failures.push_back(json{{"id", id}, {"reason", o.error}});
      continue;
    }
    if (!alphabet) {
      alphabet = *o.alphabet;
    }
    lines.push_back(std::move(*o.line));
  }

  write_text_file(out_boundaries, boundaries_to_json(alphabet.value_or(Alphabet{}), lines));
  json report{{"aligned", lines.size()}, {"failed", failures}, {"total", manifest.records.size()}};
  write_text_file(fs::path(out_boundaries.string() + ".report.json"), report.dump(1) + "\n");
  log("segment: aligned ", lines.size(), " of ", manifest.records.size(), " lines");
  return options.strict && !failures.empty() ? 1 : 0;
}

int cmd_build_index(const fs::path& manifest_path, const fs::path& boundaries_path, const fs::path& out_index,
                    const CommonOptions& options) {
  const Log log(options.log);
  const DatasetManifest manifest = read_manifest(manifest_path);
  BoundaryDocument doc = boundaries_from_json(read_text_file(boundaries_path));

  std::map<std::string, BoundarySet> by_id;
  std::map<std::string, const ManifestRecord*> manifest_ids;
  for (const auto& r : manifest.records) {
    manifest_ids.emplace(r.id, &r);
  }
  for (auto& line : doc.lines) {
    if (!manifest_ids.contains(line.id)) {
      throw CorruptBoundary(line.id, "boundary line is not present in manifest '" + manifest_path.string() + "'");
    }
    by_id.emplace(line.id, std::move(line.boundaries));
  }

  const fs::path out_dir = parent_or_cwd(out_index);
  std::vector<IndexedLine> lines;
  std::vector<std::u32string> transcripts;
  std::size_t missing = 0;
  for (const ManifestRecord* r : manifest.train()) {
    auto it = by_id.find(r->id);
    if (it == by_id.end()) {
      if (options.strict) {
        throw CorruptBoundary(r->id, "train line has no boundaries");
      }
      log("warning: line '", r->id, "' has no boundaries, skipped");
      ++missing;
      continue;
    }
    IndexedLine line{r->id, relative_to(r->resolved_image, out_dir).generic_string(), utf8::decode(r->transcript),
                     it->second};
    transcripts.push_back(line.transcript);
    lines.push_back(std::move(line));
  }
  if (lines.empty()) {
    throw InvalidArgument("build-index: no train lines with boundaries");
  }

  const auto& sm = options.config.stackmix;
  const TokenizerBank bank = build_mwe_lexicons(transcripts, sm.dims, sm.probabilities);
  const FragmentIndex index = build_fragment_index(std::move(lines), bank, doc.alphabet);
  write_text_file(out_index, index_to_json(index, bank));

  std::size_t fragments = 0;
  for (const auto& [token, list] : index.entries()) {
    fragments += list.size();
  }
  for (const auto& lex : bank.lexicons) {
    log("build-index: dim ", lex.max_dim, ": ", lex.expressions.size(), " expressions");
  }
  log("build-index: ", index.lines().size(), " lines, ", index.entries().size(), " tokens, ", fragments,
      " fragments", missing > 0 ? " (some lines skipped)" : "");
  return 0;
}

int cmd_synthesize(const fs::path& index_path, const fs::path& corpus_path, std::size_t n_lines,
                   const fs::path& out_dir, bool page_mode, const CommonOptions& options) {
  const Log log(options.log);
  const auto& sm = options.config.stackmix;
  const LoadedIndex loaded = index_from_json(read_text_file(index_path), sm.probabilities);
  const FileImageStore store(parent_or_cwd(index_path));

  const auto corpus_lines = split_lines(read_text_file(corpus_path));
  const CorpusFilterResult filtered = filter_corpus(corpus_lines, loaded.index.alphabet());
  std::vector<std::u32string> usable;
  std::size_t unsynthesizable = 0;
  for (const auto& text : filtered.kept) {
    if (missing_characters(text, loaded.index).empty()) {
      usable.push_back(text);
    } else {
      ++unsynthesizable;
    }
  }
  log("synthesize: corpus kept ", filtered.kept.size(), ", dropped ", filtered.dropped, " (alphabet), skipped ",
      unsynthesizable, " (no fragments)");
  if (usable.empty()) {
    log("error: no synthesizable corpus lines");
    return 1;
  }
  fs::create_directories(out_dir);

  if (page_mode) {
    std::vector<std::u32string> texts;
    std::string listing;
    for (std::size_t i = 0; i < std::max<std::size_t>(n_lines, 1); ++i) {
      texts.push_back(usable[i % usable.size()]);
      listing += utf8::encode(texts.back()) + "\n";
    }
    RngState rng(options.config.seed);
    const RasterImage page =
        synthesize_page(texts, loaded.index, loaded.bank, store, rng, sm.target_height, sm.page_gap);
    save_image(page, out_dir / "page.png");
    write_text_file(out_dir / "page.txt", listing);
    log("synthesize: wrote page with ", texts.size(), " lines");
    return 0;
  }

  struct Produced {
    std::string label;
    std::size_t lexicon = 0;
    std::vector<ProvenanceEntry> provenance;
    std::string error;
  };
  std::vector<Produced> produced(n_lines);
  SynthesisOptions synth_options;
  synth_options.target_height = sm.target_height;
  parallel_for(n_lines, options.jobs, [&](std::size_t i) {
    try {
      RngState rng(derive_seed(options.config.seed, i));
      const auto& text = usable[i % usable.size()];
      SynthesisResult r = synthesize_line(text, loaded.index, loaded.bank, store, rng, synth_options);
      save_image(r.image, out_dir / (numbered("synth_", i) + ".png"));
      produced[i] = Produced{utf8::encode(r.label), r.lexicon, std::move(r.provenance), {}};
    } catch (const std::exception& e) {
      produced[i].error = e.what();
    }
  });

  DatasetManifest out_manifest;
  std::string sidecar;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < n_lines; ++i) {
    const auto& p = produced[i];
    const std::string id = numbered("synth_", i);
    if (!p.error.empty()) {
      log("error: line '", id, "': ", p.error);
      ++failures;
      continue;
    }
    out_manifest.records.push_back(ManifestRecord{id, id + ".png", p.label, "train", {}});
    json tokens = json::array();
    for (const auto& e : p.provenance) {
      tokens.push_back(json{{"token", utf8::encode(e.token)}, {"line", e.line_id}, {"start", e.start_px},
                            {"end", e.end_px}});
    }
    sidecar += json{{"id", id}, {"label", p.label}, {"lexicon", p.lexicon}, {"tokens", std::move(tokens)}}.dump() +
               "\n";
  }
  write_manifest(out_dir / "manifest.tsv", out_manifest);
  write_text_file(out_dir / "provenance.jsonl", sidecar);
  log("synthesize: wrote ", out_manifest.records.size(), " lines");
  return options.strict && failures > 0 ? 1 : 0;
}

int cmd_augment(const fs::path& manifest_path, const fs::path& out_dir, const std::optional<fs::path>& boundaries,
                const CommonOptions& options) {
  const Log log(options.log);
  const DatasetManifest manifest = read_manifest(manifest_path);
  std::map<std::string, BoundarySet> by_id;
  if (boundaries) {
    for (auto& line : boundaries_from_json(read_text_file(*boundaries)).lines) {
      by_id.emplace(line.id, std::move(line.boundaries));
    }
  }
  fs::create_directories(out_dir);

  std::vector<std::string> written(manifest.records.size());
  std::vector<std::string> errors(manifest.records.size());
  parallel_for(manifest.records.size(), options.jobs, [&](std::size_t i) {
    const auto& record = manifest.records[i];
    try {
      const RasterImage image = load_image(record.resolved_image);
      RngState rng(derive_seed(options.config.seed, i));
      auto it = by_id.find(record.id);
      const BoundarySet* bs = it == by_id.end() ? nullptr : &it->second;
      const BlotOutcome outcome = apply_handwritten_blots_traced(image, options.config.blot, rng, bs);

      std::string ext = record.resolved_image.extension().string();
      if (ext != ".png" && ext != ".pgm") {
        ext = ".png";
      }
      const std::string name = safe_file_stem(record.id) + ext;
      if (!outcome.applied && record.resolved_image.extension() == ext) {
        fs::copy_file(record.resolved_image, out_dir / name, fs::copy_options::overwrite_existing);
      } else {
        save_image(outcome.image, out_dir / name);
      }
      written[i] = name;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  DatasetManifest out_manifest;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& record = manifest.records[i];
    if (!errors[i].empty()) {
      log("error: line '", record.id, "': ", errors[i]);
      ++failures;
      continue;
    }
    out_manifest.records.push_back(ManifestRecord{record.id, written[i], record.transcript, record.split, {}});
  }
  write_manifest(out_dir / "manifest.tsv", out_manifest);
  log("augment: wrote ", out_manifest.records.size(), " of ", manifest.records.size(), " lines");
  return options.strict && failures > 0 ? 1 : 0;
}

int cmd_evaluate(const fs::path& predictions, bool lowercase, const std::optional<fs::path>& out_json,
                 std::ostream& out, const CommonOptions& options) {
  (void)options;
  std::vector<metrics::EvalPair> pairs;
  std::size_t lineno = 0;
  for (const auto& line : split_lines(read_text_file(predictions))) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    if (lineno == 1 && line == "id\tprediction\ttruth") {
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw FormatError("'" + predictions.string() + "' line " + std::to_string(lineno) +
                        ": expected id<TAB>prediction<TAB>truth");
    }
    pairs.push_back(metrics::EvalPair{line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)});
  }
  const metrics::EvalReport report = metrics::evaluate(pairs, metrics::EvalOptions{lowercase});
  const json doc{{"cer", report.cer}, {"wer", report.wer}, {"acc", report.acc}, {"n", report.n}};
  const std::string text = doc.dump() + "\n";
  out << text;
  if (out_json) {
    write_text_file(*out_json, text);
  }
  return 0;
}

PreviewMode parse_preview_mode(const std::string& name) {
  if (name == "original") {
    return PreviewMode::Original;
  }
  if (name == "blotted") {
    return PreviewMode::Blotted;
  }
  if (name == "synthesized") {
    return PreviewMode::Synthesized;
  }
  if (name == "mixed") {
    return PreviewMode::Mixed;
  }
  throw InvalidArgument("unknown preview mode '" + name + "' (original|blotted|synthesized|mixed)");
}

int cmd_preview(const fs::path& source, const fs::path& out_png, std::size_t samples, PreviewMode mode,
                const CommonOptions& options) {
  const Log log(options.log);
  const auto& cfg = options.config;
  const int height = cfg.stackmix.target_height;

  std::optional<LoadedIndex> loaded;
  std::unique_ptr<ImageStore> store;
  struct Sample {
    fs::path image_path; // manifest source
    std::size_t line = 0; // index source
  };
  std::vector<Sample> pool;
  if (source.extension() == ".json") {
    loaded = index_from_json(read_text_file(source), cfg.stackmix.probabilities);
    store = std::make_unique<FileImageStore>(parent_or_cwd(source));
    for (std::size_t i = 0; i < loaded->index.lines().size(); ++i) {
      pool.push_back(Sample{{}, i});
    }
  } else {
    if (mode == PreviewMode::Synthesized) {
      throw InvalidArgument("preview: synthesized mode needs an index source");
    }
    for (const auto& r : read_manifest(source).records) {
      pool.push_back(Sample{r.resolved_image, 0});
    }
  }
  if (pool.empty() || samples == 0) {
    throw InvalidArgument("preview: nothing to show");
  }

  RngState picker(cfg.seed);
  const auto order = shuffled_indices(pool.size(), picker);
  BlotConfig always = cfg.blot;
  always.proba = 1.0;

  std::vector<RasterImage> rows;
  for (std::size_t k = 0; k < std::min(samples, pool.size()); ++k) {
    const Sample& s = pool[order[k]];
    const RasterImage original = loaded ? *store->load(loaded->index.lines()[s.line]) : load_image(s.image_path);
    const RasterImage scaled = resize_to_height(original, height);
    RngState rng(derive_seed(cfg.seed, k + 1));
    const bool show_original = mode == PreviewMode::Original || mode == PreviewMode::Mixed;
    const bool show_blotted = mode == PreviewMode::Blotted || mode == PreviewMode::Mixed;
    const bool show_synth = loaded && (mode == PreviewMode::Synthesized || mode == PreviewMode::Mixed);
    if (show_original) {
      rows.push_back(scaled);
    }
    if (show_blotted) {
      rows.push_back(apply_handwritten_blots(scaled, always, rng));
    }
    if (show_synth) {
      SynthesisOptions so;
      so.target_height = height;
      const auto& text = loaded->index.lines()[s.line].transcript;
      rows.push_back(synthesize_line(text, loaded->index, loaded->bank, *store, rng, so).image);
    }
  }
  save_image(vstack(rows, 8), out_png);
  log("preview: wrote ", rows.size(), " rows to ", out_png.string());
  return 0;
}

} // namespace scribeforge::cli
