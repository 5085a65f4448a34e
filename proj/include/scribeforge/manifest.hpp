#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace scribeforge {

struct ManifestRecord {
  std::string id;
  std::string image_path; // as written in the file
  std::string transcript; // UTF-8
  std::string split;      // "", "train", "val" or "test"

  std::filesystem::path resolved_image; // image_path resolved against the manifest's directory
};

/// Line manifest: UTF-8 TSV "id<TAB>image_path<TAB>transcript[<TAB>split]". Blank lines and
/// lines starting with '#' are ignored.
struct DatasetManifest {
  std::vector<ManifestRecord> records;

  /// Records whose split is empty or "train".
  std::vector<const ManifestRecord*> train() const;
};

/// Throws FormatError on malformed rows or duplicate ids. With check_images, also when a
/// referenced image does not exist.
DatasetManifest read_manifest(const std::filesystem::path& path, bool check_images = true);
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               bool check_images = false);

std::string format_manifest(const DatasetManifest& manifest);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Splits on '\n', dropping a trailing '\r' from every line.
std::vector<std::string> split_lines(const std::string& text);

} // namespace scribeforge
