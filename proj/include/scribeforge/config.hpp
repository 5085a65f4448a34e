#pragma once

#include "scribeforge/blot.hpp"
#include "scribeforge/stackmix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scribeforge {

struct StackMixSettings {
  int target_height = kCanonicalLineHeight;
  std::vector<int> dims{kDefaultTokenizerDims.begin(), kDefaultTokenizerDims.end()};
  std::vector<double> probabilities{kDefaultTokenizerProbs.begin(), kDefaultTokenizerProbs.end()};
  double on_the_fly_proba = 0.8; // share of synthesized samples during training
  int page_gap = 16;
};

/// Run configuration read from JSON. Every field is optional and defaults to the standard values:
///   {"seed": 0, "blot": {"min_h": 50, ...}, "stackmix": {"target_height": 128, ...}}
struct RunConfig {
  std::uint64_t seed = 0;
  BlotConfig blot;
  StackMixSettings stackmix;

  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

} // namespace scribeforge
