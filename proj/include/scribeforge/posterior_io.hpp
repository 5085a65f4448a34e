#pragma once

#include "scribeforge/ctc_align.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace scribeforge {

struct PosteriorFile {
  PosteriorMatrix posteriors;
  Alphabet alphabet;
};

// CTCP1 layout, all integers little-endian:
//   "CTCP" | 0x01 | u32 T | u32 C | T*C f32 (frame-major) | u32 n | n bytes UTF-8 alphabet
// C must equal |alphabet| + 1; the blank is the implicit last column.
std::vector<std::uint8_t> encode_ctcp(const PosteriorMatrix& posteriors, const Alphabet& alphabet);
PosteriorFile decode_ctcp(const std::vector<std::uint8_t>& bytes);

PosteriorFile read_posterior_file(const std::filesystem::path& path);
void write_posterior_file(const std::filesystem::path& path, const PosteriorMatrix& posteriors,
                          const Alphabet& alphabet);

} // namespace scribeforge
