#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hegemony/core.hpp"

namespace hegemony {

struct SweepOptions {
  /// Rough accumulator budget per pass, in path-ASN slots. When the
  /// estimated footprint exceeds it, origins are sharded into ranges and the
  /// snapshot is swept once per shard; results are identical either way.
  std::uint64_t max_slots = 50'000'000;
  std::function<void(const std::string&)> log; // optional progress sink
};

struct SweepInfo {
  std::size_t origins = 0;
  std::size_t shards = 0;
};

/// Computes hegemony for every origin AS's local graph in one pass per shard
/// over the snapshot, bit-identical to calling compute_hegemony with
/// Local(origin) once per origin.
std::map<Asn, HegemonyResult> sweep(const Snapshot& snapshot,
                                    const SweepOptions& options = {},
                                    unsigned jobs = 1, SweepInfo* info = nullptr);

struct LocalSummary {
  Asn origin = 0;
  std::uint64_t nodes = 0;           // scored ASes, origin excluded
  std::uint64_t zero_hegemony = 0;   // of those, H == 0
  std::uint64_t above_threshold = 0; // of those, H > threshold
};

/// Per-origin dependency counts; default threshold 0.01.
std::vector<LocalSummary> summarize_local(const std::map<Asn, HegemonyResult>& results,
                                          double threshold = 0.01);

} // namespace hegemony
