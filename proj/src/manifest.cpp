#include "scribeforge/manifest.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/index_io.hpp"

#include <unordered_set>

namespace scribeforge {

std::vector<const ManifestRecord*> DatasetManifest::train() const {
  std::vector<const ManifestRecord*> out;
  for (const auto& r : records) {
    if (r.split.empty() || r.split == "train") {
      out.push_back(&r);
    }
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

} // namespace

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir, bool check_images) {
  DatasetManifest manifest;
  std::unordered_set<std::string> seen;
  std::size_t lineno = 0;
  for (const auto& line : split_lines(text)) {
    ++lineno;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() < 3 || fields.size() > 4) {
      throw FormatError("manifest line " + std::to_string(lineno) + ": expected 3 or 4 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    ManifestRecord r{fields[0], fields[1], fields[2], fields.size() == 4 ? fields[3] : "", {}};
    if (r.id.empty()) {
      throw FormatError("manifest line " + std::to_string(lineno) + ": empty id");
    }
    if (!seen.insert(r.id).second) {
      throw FormatError("manifest line " + std::to_string(lineno) + ": duplicate id '" + r.id + "'");
    }
    if (!r.split.empty() && r.split != "train" && r.split != "val" && r.split != "test") {
      throw FormatError("manifest line " + std::to_string(lineno) + ": unknown split '" + r.split + "'");
    }
    std::filesystem::path p(r.image_path);
    r.resolved_image = p.is_relative() ? base_dir / p : p;
    if (check_images && !std::filesystem::exists(r.resolved_image)) {
      throw FormatError("manifest line " + std::to_string(lineno) + ": image '" + r.resolved_image.string() +
                        "' does not exist");
    }
    manifest.records.push_back(std::move(r));
  }
  return manifest;
}

DatasetManifest read_manifest(const std::filesystem::path& path, bool check_images) {
  try {
    return parse_manifest(read_text_file(path), path.parent_path(), check_images);
  } catch (const FormatError& e) {
    throw FormatError("'" + path.string() + "': " + e.what());
  }
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out;
  for (const auto& r : manifest.records) {
    out += r.id + '\t' + r.image_path + '\t' + r.transcript;
    if (!r.split.empty()) {
      out += '\t' + r.split;
    }
    out += '\n';
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  write_text_file(path, format_manifest(manifest));
}

} // namespace scribeforge
