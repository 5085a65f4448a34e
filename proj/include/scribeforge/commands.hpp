#pragma once

#include "scribeforge/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scribeforge::cli {

namespace fs = std::filesystem;

struct CommonOptions {
  RunConfig config;
  bool strict = false;
  int jobs = 1;
  std::ostream* log = nullptr; // progress and per-line errors; nullptr silences them
};

/// Default worker count: SCRIBEFORGE_JOBS when set to a positive integer, else 1.
int default_jobs();

// Every command returns the process exit code. Fatal input problems throw (FormatError,
// CorruptBoundary, ...); per-line problems are logged with the line id and only change the
// exit code under --strict.

/// Aligns <posterior_dir>/<id>.ctcp for each manifest line and writes the boundary JSON plus
/// <out_boundaries>.report.json.
int cmd_segment(const fs::path& manifest, const fs::path& posterior_dir, const fs::path& out_boundaries,
                const CommonOptions& options);

/// Builds lexicons and the fragment index from the manifest's train split.
int cmd_build_index(const fs::path& manifest, const fs::path& boundaries, const fs::path& out_index,
                    const CommonOptions& options);

/// Writes n_lines synthesized images, manifest.tsv and provenance.jsonl into out_dir,
/// or a single page.png holding n_lines lines when page_mode is set.
int cmd_synthesize(const fs::path& index, const fs::path& corpus, std::size_t n_lines, const fs::path& out_dir,
                   bool page_mode, const CommonOptions& options);

/// Blotted copies of every manifest image plus a manifest with unchanged transcripts.
int cmd_augment(const fs::path& manifest, const fs::path& out_dir, const std::optional<fs::path>& boundaries,
                const CommonOptions& options);

/// Reads "id<TAB>prediction<TAB>truth" rows and prints {cer, wer, acc, n} as JSON.
int cmd_evaluate(const fs::path& predictions, bool lowercase, const std::optional<fs::path>& out_json,
                 std::ostream& out, const CommonOptions& options);

enum class PreviewMode { Original, Blotted, Synthesized, Mixed };
PreviewMode parse_preview_mode(const std::string& name);

/// Contact sheet of sample lines. source is an index (.json) or a manifest (.tsv).
int cmd_preview(const fs::path& source, const fs::path& out_png, std::size_t samples, PreviewMode mode,
                const CommonOptions& options);

} // namespace scribeforge::cli
