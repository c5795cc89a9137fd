// Run configuration: `key = value` files driving the command-line pipeline.
#pragma once

#include <cstdint>
#include <string>

#include "chatmood/evolve.hpp"

namespace chatmood {

struct RunConfig {
  std::string name = "run";            // run directory under output_dir
  std::string corpus_path;             // chat export consumed by ingest
  std::string source_kind = "zulip";   // zulip | jsonl
  std::string resource_dir;            // lexicons, dictionary, abbreviations
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  int timezone_offset_minutes = 0;
  int repeats = 20;                    // evaluation repetitions
  EvolutionConfig evolution;           // evolution.seed follows `seed`

  std::string run_dir() const { return output_dir + "/" + name; }

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines are
/// ignored. Unknown keys, bad numbers, and duplicates are ConfigErrors with
/// line numbers. The result is validated.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace chatmood
