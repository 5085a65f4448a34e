#include "scribeforge/bezier.hpp"
#include "scribeforge/blot.hpp"
#include "scribeforge/commands.hpp"
#include "scribeforge/ctc_align.hpp"
#include "scribeforge/errors.hpp"
#include "scribeforge/image_io.hpp"
#include "scribeforge/index_io.hpp"
#include "scribeforge/metrics.hpp"
#include "scribeforge/posterior_io.hpp"
#include "scribeforge/raster.hpp"
#include "scribeforge/stackmix.hpp"
#include "scribeforge/utf8.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <sstream>

namespace py = pybind11;
using namespace scribeforge;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

RasterImage to_raster(const ImageArray& a) {
  if (a.ndim() != 2) {
    throw InvalidArgument("expected a 2-D uint8 array (height, width)");
  }
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  std::vector<Luminance> px(static_cast<std::size_t>(a.size()));
  std::memcpy(px.data(), a.data(), px.size());
  return RasterImage(w, h, std::move(px));
}

ImageArray to_array(const RasterImage& img) {
  ImageArray out({img.height(), img.width()});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
  return out;
}

std::vector<RasterImage> to_rasters(const std::vector<ImageArray>& arrays) {
  std::vector<RasterImage> out;
  out.reserve(arrays.size());
  for (const auto& a : arrays) {
    out.push_back(to_raster(a));
  }
  return out;
}

PosteriorMatrix to_posteriors(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) {
    throw InvalidArgument("expected a 2-D float array (frames, columns)");
  }
  std::vector<float> v(a.data(), a.data() + a.size());
  return PosteriorMatrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)), std::move(v));
}

py::list spans_to_list(const std::vector<SymbolSpan>& spans) {
  py::list out;
  for (const auto& s : spans) {
    out.append(py::make_tuple(utf8::encode(s.character), s.start_px, s.end_px));
  }
  return out;
}

std::vector<metrics::EvalPair> to_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<metrics::EvalPair> out;
  for (const auto& [p, t] : pairs) {
    out.push_back({p, t});
  }
  return out;
}

// An index file plus its image store, ready for synthesis.
class Synthesizer {
public:
  explicit Synthesizer(const std::filesystem::path& index_path)
      : loaded_(index_from_json(read_text_file(index_path))),
        store_(index_path.has_parent_path() ? index_path.parent_path() : std::filesystem::path(".")) {}

  py::dict synthesize(const std::string& text, std::uint64_t seed, int target_height, bool per_character) const {
    RngState rng(seed);
    SynthesisOptions opts;
    opts.target_height = target_height;
    opts.per_character = per_character;
    const auto r = synthesize_line(utf8::decode(text), loaded_.index, loaded_.bank, store_, rng, opts);
    py::list prov;
    for (const auto& e : r.provenance) {
      prov.append(py::make_tuple(utf8::encode(e.token), e.line_id, e.start_px, e.end_px));
    }
    py::dict out;
    out["image"] = to_array(r.image);
    out["label"] = utf8::encode(r.label);
    out["provenance"] = prov;
    out["lexicon"] = loaded_.bank.lexicons[r.lexicon].max_dim;
    return out;
  }

  std::string missing(const std::string& text) const {
    return utf8::encode(missing_characters(utf8::decode(text), loaded_.index));
  }

  std::string alphabet() const { return loaded_.index.alphabet().to_utf8(); }
  std::size_t lines() const { return loaded_.index.lines().size(); }
  std::size_t tokens() const { return loaded_.index.entries().size(); }

private:
  LoadedIndex loaded_;
  FileImageStore store_;
};

cli::CommonOptions options(const std::optional<std::filesystem::path>& config, std::optional<std::uint64_t> seed,
                           bool strict, int jobs) {
  cli::CommonOptions o;
  if (config) {
    o.config = load_run_config(*config);
  }
  if (seed) {
    o.config.seed = *seed;
  }
  o.strict = strict;
  o.jobs = jobs > 0 ? jobs : cli::default_jobs();
  return o;
}

} // namespace

PYBIND11_MODULE(_scribeforge, m) {
  m.doc() = "Handwriting line augmentation: strikethrough blots and StackMix synthesis";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<AlignmentInfeasible>(m, "AlignmentInfeasible", PyExc_ValueError);
  py::register_exception<InvalidTranscript>(m, "InvalidTranscript", PyExc_ValueError);
  py::register_exception<CorruptBoundary>(m, "CorruptBoundary", PyExc_ValueError);
  py::register_exception<UnsynthesizableLine>(m, "UnsynthesizableLine", PyExc_ValueError);
  py::register_exception<UndefinedDenominator>(m, "UndefinedDenominator", PyExc_ZeroDivisionError);

  // Images are (height, width) uint8 arrays, 0 = ink, 255 = paper.
  m.def("load_image", [](const std::filesystem::path& p) { return to_array(load_image(p)); }, py::arg("path"));
  m.def("save_image", [](const ImageArray& a, const std::filesystem::path& p) { save_image(to_raster(a), p); },
        py::arg("image"), py::arg("path"));
  m.def("composite_ink",
        [](const ImageArray& a, int x, int y, double opacity, int ink) {
          return to_array(composite_ink(to_raster(a), x, y, opacity, static_cast<Luminance>(ink)));
        },
        py::arg("image"), py::arg("x"), py::arg("y"), py::arg("opacity"), py::arg("ink") = 0);
  m.def("resize_to_height", [](const ImageArray& a, int h) { return to_array(resize_to_height(to_raster(a), h)); },
        py::arg("image"), py::arg("height"));
  m.def("hstack",
        [](const std::vector<ImageArray>& imgs, int h) { return to_array(hstack(to_rasters(imgs), h)); },
        py::arg("images"), py::arg("height"));
  m.def("vstack",
        [](const std::vector<ImageArray>& imgs, int gap) { return to_array(vstack(to_rasters(imgs), gap)); },
        py::arg("images"), py::arg("gap") = 0);

  m.def("bernstein", &bernstein, py::arg("j"), py::arg("n"), py::arg("s"));
  m.def("bezier_point",
        [](const std::vector<std::pair<double, double>>& pts, double s) {
          std::vector<Point2> v;
          for (auto [x, y] : pts) {
            v.push_back({x, y});
          }
          const auto p = bezier_point(ControlPolygon(v), s);
          return std::make_pair(p.x, p.y);
        },
        py::arg("points"), py::arg("s"));

  py::class_<BlotConfig>(m, "BlotConfig")
      .def(py::init<>())
      .def_readwrite("min_h", &BlotConfig::min_h)
      .def_readwrite("max_h", &BlotConfig::max_h)
      .def_readwrite("min_w", &BlotConfig::min_w)
      .def_readwrite("max_w", &BlotConfig::max_w)
      .def_readwrite("incline", &BlotConfig::incline)
      .def_readwrite("intensity", &BlotConfig::intensity)
      .def_readwrite("transparency", &BlotConfig::transparency)
      .def_readwrite("count_min", &BlotConfig::count_min)
      .def_readwrite("count_max", &BlotConfig::count_max)
      .def_readwrite("proba", &BlotConfig::proba)
      .def_readwrite("thickness", &BlotConfig::thickness)
      .def_readwrite("repeat_proba", &BlotConfig::repeat_proba)
      .def("validate", &BlotConfig::validate);

  m.def("apply_handwritten_blots",
        [](const ImageArray& a, const BlotConfig& cfg, std::uint64_t seed) {
          RngState rng(seed);
          const auto out = apply_handwritten_blots_traced(to_raster(a), cfg, rng);
          py::list regions;
          for (const auto& r : out.regions) {
            regions.append(py::make_tuple(r.x, r.y, r.w, r.h));
          }
          return py::make_tuple(to_array(out.image), out.applied, regions);
        },
        py::arg("image"), py::arg("config") = BlotConfig{}, py::arg("seed") = 0,
        "Returns (image, applied, regions) where regions are (x, y, w, h) tuples.");

  m.def("extract_boundaries",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& post, const std::string& transcript,
           const std::string& alphabet, int width) {
          const auto b = extract_boundaries(to_posteriors(post), utf8::decode(transcript), Alphabet::from_utf8(alphabet),
                                            width, "");
          return spans_to_list(b.spans);
        },
        py::arg("posteriors"), py::arg("transcript"), py::arg("alphabet"), py::arg("width"),
        "Spans (char, start_px, end_px) tiling [0, width). The blank is the last posterior column.");
  m.def("read_posterior_file",
        [](const std::filesystem::path& p) {
          const auto f = read_posterior_file(p);
          py::array_t<float> arr({f.posteriors.frames(), f.posteriors.columns()});
          std::memcpy(arr.mutable_data(), f.posteriors.values().data(), f.posteriors.values().size() * sizeof(float));
          return py::make_tuple(arr, f.alphabet.to_utf8());
        },
        py::arg("path"));
  m.def("write_posterior_file",
        [](const std::filesystem::path& p, const py::array_t<float, py::array::c_style | py::array::forcecast>& post,
           const std::string& alphabet) { write_posterior_file(p, to_posteriors(post), Alphabet::from_utf8(alphabet)); },
        py::arg("path"), py::arg("posteriors"), py::arg("alphabet"));

  m.def("levenshtein",
        [](const std::string& a, const std::string& b) { return metrics::levenshtein(utf8::decode(a), utf8::decode(b)); },
        py::arg("a"), py::arg("b"));
  m.def("evaluate",
        [](const std::vector<std::pair<std::string, std::string>>& pairs, bool lowercase) {
          const auto r = metrics::evaluate(to_pairs(pairs), {lowercase});
          py::dict d;
          d["cer"] = r.cer;
          d["wer"] = r.wer;
          d["acc"] = r.acc;
          d["n"] = r.n;
          return d;
        },
        py::arg("pairs"), py::arg("lowercase") = false, "pairs are (prediction, truth) tuples.");

  py::class_<Synthesizer>(m, "Synthesizer")
      .def(py::init<const std::filesystem::path&>(), py::arg("index_path"))
      .def("synthesize", &Synthesizer::synthesize, py::arg("text"), py::arg("seed") = 0,
           py::arg("target_height") = kCanonicalLineHeight, py::arg("per_character") = false)
      .def("missing_characters", &Synthesizer::missing, py::arg("text"))
      .def_property_readonly("alphabet", &Synthesizer::alphabet)
      .def_property_readonly("line_count", &Synthesizer::lines)
      .def_property_readonly("token_count", &Synthesizer::tokens);

  // Batch commands, same behavior as the CLI subcommands. Each returns the exit code.
  using OptPath = std::optional<std::filesystem::path>;
  using OptSeed = std::optional<std::uint64_t>;
  m.def("segment",
        [](const std::filesystem::path& manifest, const std::filesystem::path& posteriors,
           const std::filesystem::path& out, OptPath config, OptSeed seed, bool strict, int jobs) {
          return cli::cmd_segment(manifest, posteriors, out, options(config, seed, strict, jobs));
        },
        py::arg("manifest"), py::arg("posteriors"), py::arg("out"), py::arg("config") = py::none(),
        py::arg("seed") = py::none(), py::arg("strict") = false, py::arg("jobs") = 0);
  m.def("build_index",
        [](const std::filesystem::path& manifest, const std::filesystem::path& boundaries,
           const std::filesystem::path& out, OptPath config, OptSeed seed, bool strict, int jobs) {
          return cli::cmd_build_index(manifest, boundaries, out, options(config, seed, strict, jobs));
        },
        py::arg("manifest"), py::arg("boundaries"), py::arg("out"), py::arg("config") = py::none(),
        py::arg("seed") = py::none(), py::arg("strict") = false, py::arg("jobs") = 0);
  m.def("synthesize",
        [](const std::filesystem::path& index, const std::filesystem::path& corpus, std::size_t lines,
           const std::filesystem::path& out, bool page, OptPath config, OptSeed seed, bool strict, int jobs) {
          return cli::cmd_synthesize(index, corpus, lines, out, page, options(config, seed, strict, jobs));
        },
        py::arg("index"), py::arg("corpus"), py::arg("lines"), py::arg("out"), py::arg("page") = false,
        py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("strict") = false, py::arg("jobs") = 0);
  m.def("augment",
        [](const std::filesystem::path& manifest, const std::filesystem::path& out, OptPath boundaries, OptPath config,
           OptSeed seed, bool strict, int jobs) {
          return cli::cmd_augment(manifest, out, boundaries, options(config, seed, strict, jobs));
        },
        py::arg("manifest"), py::arg("out"), py::arg("boundaries") = py::none(), py::arg("config") = py::none(),
        py::arg("seed") = py::none(), py::arg("strict") = false, py::arg("jobs") = 0);
  m.def("preview",
        [](const std::filesystem::path& source, const std::filesystem::path& out, std::size_t samples,
           const std::string& mode, OptPath config, OptSeed seed) {
          return cli::cmd_preview(source, out, samples, cli::parse_preview_mode(mode), options(config, seed, false, 1));
        },
        py::arg("source"), py::arg("out"), py::arg("samples") = 8, py::arg("mode") = "mixed",
        py::arg("config") = py::none(), py::arg("seed") = py::none());
}
