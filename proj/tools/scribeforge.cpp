#include "scribeforge/commands.hpp"
#include "scribeforge/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace sf = scribeforge;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"scribeforge: synthetic handwritten line generation (StackMix, HandWritten Blots) and HTR metrics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  int jobs = sf::cli::default_jobs();
  app.add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_flag("--strict", strict, "Exit non-zero if any line fails");
  app.add_option("--jobs", jobs, "Worker threads (default: $SCRIBEFORGE_JOBS or 1)")->check(CLI::PositiveNumber);

  std::string manifest, posteriors, out, boundaries, index, corpus, predictions, source, mode = "mixed";
  std::optional<std::string> out_json, aug_boundaries;
  std::size_t n_lines = 100;
  std::size_t samples = 8;
  bool page = false;
  bool lowercase = false;

  auto* segment = app.add_subcommand("segment", "Align CTC posteriors into per-character boundaries");
  segment->add_option("--manifest", manifest, "Line manifest TSV")->required()->check(CLI::ExistingFile);
  segment->add_option("--posteriors", posteriors, "Directory with <id>.ctcp files")->required();
  segment->add_option("--out", out, "Boundary JSON to write")->required();

  auto* build = app.add_subcommand("build-index", "Build MWE lexicons and the fragment index");
  build->add_option("--manifest", manifest, "Line manifest TSV")->required()->check(CLI::ExistingFile);
  build->add_option("--boundaries", boundaries, "Boundary JSON from 'segment'")->required()->check(CLI::ExistingFile);
  build->add_option("--out", out, "Index JSON to write")->required();
  std::vector<int> dims;
  build->add_option("--dims", dims, "Tokenizer dimensions, comma separated (default 3,4,5,6,7,8)")->delimiter(',');

  auto* synth = app.add_subcommand("synthesize", "Generate StackMix lines from a corpus");
  synth->add_option("--index", index, "Index JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--corpus", corpus, "UTF-8 corpus, one line per record")->required()->check(CLI::ExistingFile);
  synth->add_option("--lines", n_lines, "Number of lines to generate");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_flag("--page", page, "Write a single multi-line page instead of separate lines");

  auto* augment = app.add_subcommand("augment", "Apply HandWritten Blots to every manifest image");
  augment->add_option("--manifest", manifest, "Line manifest TSV")->required()->check(CLI::ExistingFile);
  augment->add_option("--boundaries", aug_boundaries, "Optional boundary JSON to center blots on characters");
  augment->add_option("--out", out, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Compute CER, WER and ACC");
  evaluate->add_option("predictions", predictions, "TSV: id, prediction, truth")->required()->check(CLI::ExistingFile);
  evaluate->add_flag("--lowercase", lowercase, "Lowercase predictions and references first");
  evaluate->add_option("--out", out_json, "Also write the JSON report here");

  auto* preview = app.add_subcommand("preview", "Render a contact sheet of sample lines");
  preview->add_option("--source", source, "Index JSON or manifest TSV")->required()->check(CLI::ExistingFile);
  preview->add_option("--out", out, "PNG to write")->required();
  preview->add_option("--samples", samples, "Number of sample lines");
  preview->add_option("--mode", mode, "original|blotted|synthesized|mixed");

  CLI11_PARSE(app, argc, argv);

  try {
    sf::cli::CommonOptions options;
    if (!config_path.empty()) {
      options.config = sf::load_run_config(config_path);
    }
    if (seed) {
      options.config.seed = *seed;
    }
    if (!dims.empty()) {
      options.config.stackmix.dims = dims;
      if (dims.size() != options.config.stackmix.probabilities.size()) {
        options.config.stackmix.probabilities.assign(dims.size(), 1.0 / static_cast<double>(dims.size()));
      }
      options.config.validate();
    }
    options.strict = strict;
    options.jobs = jobs;
    options.log = &std::cerr;

    if (*segment) {
      return sf::cli::cmd_segment(manifest, posteriors, out, options);
    }
    if (*build) {
      return sf::cli::cmd_build_index(manifest, boundaries, out, options);
    }
    if (*synth) {
      return sf::cli::cmd_synthesize(index, corpus, n_lines, out, page, options);
    }
    if (*augment) {
      std::optional<fs::path> b;
      if (aug_boundaries) {
        b = *aug_boundaries;
      }
      return sf::cli::cmd_augment(manifest, out, b, options);
    }
    if (*evaluate) {
      std::optional<fs::path> o;
      if (out_json) {
        o = *out_json;
      }
      return sf::cli::cmd_evaluate(predictions, lowercase, o, std::cout, options);
    }
    if (*preview) {
      return sf::cli::cmd_preview(source, out, samples, sf::cli::parse_preview_mode(mode), options);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
