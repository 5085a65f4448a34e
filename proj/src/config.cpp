#include "scribeforge/config.hpp"

#include "scribeforge/errors.hpp"
#include "scribeforge/index_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace scribeforge {

using nlohmann::json;

void RunConfig::validate() const {
  blot.validate();
  if (stackmix.target_height < 1) {
    throw InvalidArgument("stackmix.target_height must be positive");
  }
  if (stackmix.dims.size() != stackmix.probabilities.size() || stackmix.dims.empty()) {
    throw InvalidArgument("stackmix.dims and stackmix.probabilities must be non-empty and equally long");
  }
  double sum = 0.0;
  for (double p : stackmix.probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("stackmix.probabilities must lie in [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("stackmix.probabilities must sum to 1");
  }
  for (int d : stackmix.dims) {
    if (d < 2) {
      throw InvalidArgument("stackmix.dims entries must be >= 2");
    }
  }
  if (!(stackmix.on_the_fly_proba >= 0.0 && stackmix.on_the_fly_proba <= 1.0)) {
    throw InvalidArgument("stackmix.on_the_fly_proba must lie in [0,1]");
  }
  if (stackmix.page_gap < 0) {
    throw InvalidArgument("stackmix.page_gap must be non-negative");
  }
}

namespace {

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = it->get<T>();
  }
}

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> known) {
  if (!obj.is_object()) {
    throw FormatError(std::string("run config: '") + where + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw FormatError(std::string("run config: unknown key '") + key + "' in " + where);
    }
  }
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig cfg;
  try {
    const json doc = json::parse(json_text);
    reject_unknown(doc, "top level", {"seed", "blot", "stackmix"});
    read_opt(doc, "seed", cfg.seed);
    if (auto it = doc.find("blot"); it != doc.end()) {
      const json& b = *it;
      auto& c = cfg.blot;
      reject_unknown(b, "blot", {"min_h", "max_h", "min_w", "max_w", "incline", "intensity", "transparency",
                                 "count_min", "count_max", "proba", "thickness", "repeat_proba"});
      read_opt(b, "min_h", c.min_h);
      read_opt(b, "max_h", c.max_h);
      read_opt(b, "min_w", c.min_w);
      read_opt(b, "max_w", c.max_w);
      read_opt(b, "incline", c.incline);
      read_opt(b, "intensity", c.intensity);
      read_opt(b, "transparency", c.transparency);
      read_opt(b, "count_min", c.count_min);
      read_opt(b, "count_max", c.count_max);
      read_opt(b, "proba", c.proba);
      read_opt(b, "thickness", c.thickness);
      read_opt(b, "repeat_proba", c.repeat_proba);
    }
    if (auto it = doc.find("stackmix"); it != doc.end()) {
      const json& s = *it;
      reject_unknown(s, "stackmix", {"target_height", "dims", "probabilities", "on_the_fly_proba", "page_gap"});
      read_opt(s, "target_height", cfg.stackmix.target_height);
      read_opt(s, "dims", cfg.stackmix.dims);
      read_opt(s, "probabilities", cfg.stackmix.probabilities);
      read_opt(s, "on_the_fly_proba", cfg.stackmix.on_the_fly_proba);
      read_opt(s, "page_gap", cfg.stackmix.page_gap);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("run config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text_file(path)); }

std::string run_config_to_json(const RunConfig& config) {
  const auto& b = config.blot;
  json doc{{"seed", config.seed},
           {"blot",
            {{"min_h", b.min_h},
             {"max_h", b.max_h},
             {"min_w", b.min_w},
             {"max_w", b.max_w},
             {"incline", b.incline},
             {"intensity", b.intensity},
             {"transparency", b.transparency},
             {"count_min", b.count_min},
             {"count_max", b.count_max},
             {"proba", b.proba},
             {"thickness", b.thickness},
             {"repeat_proba", b.repeat_proba}}},
           {"stackmix",
            {{"target_height", config.stackmix.target_height},
             {"dims", config.stackmix.dims},
             {"probabilities", config.stackmix.probabilities},
             {"on_the_fly_proba", config.stackmix.on_the_fly_proba},
             {"page_gap", config.stackmix.page_gap}}}};
  return doc.dump(2) + "\n";
}

} // namespace scribeforge
