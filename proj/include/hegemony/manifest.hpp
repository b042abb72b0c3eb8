#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hegemony/core.hpp"

namespace hegemony {

inline constexpr const char* kToolName = "hegemony";
inline constexpr const char* kToolVersion = "0.1.0";

struct InputRecord {
  std::string path;
  std::string sha256;
  std::string format; // "text" | "mrt"
  std::uint64_t entries = 0;
};

struct ParseCounters {
  std::uint64_t text_bad_lines = 0;
  std::uint64_t mrt_records = 0;
  std::uint64_t mrt_skipped_records = 0;
  std::uint64_t mrt_corrupt_records = 0;
  std::uint64_t mrt_truncated_records = 0;
  std::uint64_t unknown_peer = 0;
  std::uint64_t missing_as_path = 0;
  std::uint64_t peer_mismatch = 0;
  std::uint64_t ipv6_long_prefix = 0;
};

/// Everything that determines a run's scores, echoed next to the results.
/// Deliberately excludes wall-clock time and parallelism so reruns with the
/// same inputs and flags produce byte-identical manifests.
struct RunManifest {
  std::string command; // "global" | "local" | "timeseries" | "robustness"
  HegemonyConfig config;
  std::string scope;               // "global", "local:all", "local:1,2,.."
  std::uint64_t seed = 0;
  std::vector<InputRecord> inputs;
  ParseCounters parse;
  SnapshotCounters counters;
  std::uint64_t viewpoints_total = 0;
  std::uint64_t viewpoints_full_feed = 0;
  std::uint64_t viewpoints_used = 0;  // non-empty under the scope
  std::uint64_t viewpoints_empty = 0; // eligible but retaining no path
  std::string snapshot_date;          // YYYY-MM-DD
  std::uint64_t min_timestamp = 0;
  std::uint64_t result_rows = 0;
  GraphStats graph;

  std::string to_json() const;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

/// UTC YYYY-MM-DD for a unix timestamp.
std::string utc_date(std::uint64_t timestamp);

} // namespace hegemony
