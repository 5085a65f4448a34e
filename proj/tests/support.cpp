#include "support.hpp"

#include "scribeforge/image_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>

namespace scribeforge::testing {

std::uint64_t digest_tree(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : files) {
    const std::string rel = f.lexically_relative(root).generic_string();
    h = fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(rel.data()), rel.size()), h);
    const auto bytes = read_file_bytes(f);
    h = fnv1a64(bytes, h);
  }
  return h;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          ("scribeforge-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

} // namespace scribeforge::testing
