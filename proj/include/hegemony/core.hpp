#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hegemony/normalize.hpp"
#include "hegemony/prefix_trie.hpp"
#include "hegemony/types.hpp"

namespace hegemony {

/// Graph selector: the global Internet graph, or the local graph of one
/// origin AS (paths announcing that origin only).
struct GraphScope {
  enum class Kind : std::uint8_t { global, local };
  Kind kind = Kind::global;
  Asn origin = 0;

  static GraphScope global_scope() { return {Kind::global, 0}; }
  static GraphScope local(Asn origin) { return {Kind::local, origin}; }
  bool is_local() const { return kind == Kind::local; }
  bool retains(const CleanPath& p) const {
    return kind == Kind::global || p.origin() == origin;
  }
  std::string to_string() const {
    return kind == Kind::global ? "global" : "local:" + std::to_string(origin);
  }
  bool operator==(const GraphScope&) const = default;
};

enum class WeightedMode : std::uint8_t { automatic, on, off };

struct HegemonyConfig {
  double alpha = 0.1;
  WeightedMode weighted = WeightedMode::automatic; // auto: on for IPv4, off for IPv6
  AddressFamily family = AddressFamily::ipv4;
  std::size_t min_viewpoints = 10;
  bool full_feed_only = true;
  double full_feed_fraction = 0.75;
  NormalizePolicy normalize;

  bool weighting_enabled() const {
    switch (weighted) {
      case WeightedMode::on: return true;
      case WeightedMode::off: return false;
      case WeightedMode::automatic: return family == AddressFamily::ipv4;
    }
    return false;
  }

  void validate() const {
    if (!(alpha >= 0.0 && alpha < 0.5))
      throw std::invalid_argument("alpha must be in [0, 0.5)");
    if (!(full_feed_fraction >= 0.0 && full_feed_fraction <= 1.0))
      throw std::invalid_argument("full-feed fraction must be in [0, 1]");
  }
};

/// One viewpoint's cleaned RIB: per prefix, the last-seen clean path, plus
/// the prefix trie with exclusive address counts when weighting is enabled.
struct ViewpointRib {
  Viewpoint info;
  std::vector<std::pair<IpPrefix, CleanPath>> routes; // ascending by prefix
  std::optional<PrefixTrie> trie;
};

/// Builds a test/desk ViewpointRib from explicit routes: sorts, drops
/// duplicate prefixes (last wins) and optionally builds the trie.
ViewpointRib make_viewpoint_rib(Viewpoint info,
                                std::vector<std::pair<IpPrefix, CleanPath>> routes,
                                bool build_trie);

struct SnapshotCounters {
  std::uint64_t entries_added = 0;       // entries offered to the builder
  std::uint64_t other_family = 0;        // skipped: family differs from config
  std::uint64_t duplicates_replaced = 0; // same (viewpoint, prefix), earlier row dropped
  std::uint64_t rejected_as_set = 0;
  std::uint64_t rejected_loop = 0;
  std::uint64_t rejected_reserved_asn = 0;
  std::uint64_t rejected_empty = 0;
  std::uint64_t default_routes = 0;      // 0.0.0.0/0 or ::/0, excluded
  std::uint64_t clean_routes = 0;        // rows that made it into ribs

  std::uint64_t rejected_total() const {
    return rejected_as_set + rejected_loop + rejected_reserved_asn + rejected_empty;
  }
  /// Every added entry lands in exactly one bucket.
  bool balanced() const {
    return entries_added == clean_routes + other_family + duplicates_replaced
                              + default_routes + rejected_total();
  }
};

/// A cleaned snapshot: one rib per viewpoint of the configured family,
/// viewpoints ordered by id, full-feed flags assigned.
struct Snapshot {
  HegemonyConfig config;
  std::vector<ViewpointRib> viewpoints;
  SnapshotCounters counters;
  std::uint64_t min_timestamp = 0;

  std::size_t full_feed_count() const;
};

class SnapshotBuilder {
public:
  explicit SnapshotBuilder(HegemonyConfig config);

  void add(RibEntry&& entry);

  /// Dedups per (viewpoint, prefix), normalizes paths, classifies full-feed
  /// viewpoints and builds per-viewpoint tries (when weighting is enabled).
  Snapshot finish(unsigned jobs = 1);

private:
  HegemonyConfig config_;
  SnapshotCounters counters_;
  std::uint64_t min_timestamp_ = 0;
  bool saw_entry_ = false;
  std::map<ViewpointId, std::map<IpPrefix, RawPath>> raw_; // last path wins
};

/// Per-viewpoint betweenness centrality: for each AS on a retained path,
/// the fraction of the viewpoint's total path weight carried by paths
/// containing that AS.
struct PerViewpointBC {
  ViewpointId viewpoint;
  std::vector<std::pair<Asn, double>> scores; // ascending ASN; values in [0,1]
  AddrCount total_weight = 0;                 // S_j
  std::uint64_t path_count = 0;               // retained (prefix, path) rows

  bool empty() const { return total_weight == 0; }
};

/// Computes BC for one viewpoint under `scope`. In weighted mode every
/// retained prefix must be present in `trie`, and path weights are the
/// trie's exclusive address counts; unweighted mode counts 1 per
/// (prefix, path). Endpoints count: every AS on a path receives the path's
/// weight, so the viewpoint's first-hop AS scores 1 by construction.
PerViewpointBC per_viewpoint_bc(const ViewpointRib& rib, GraphScope scope,
                                const PrefixTrie* trie, bool weighted);

/// The alpha-trimmed mean: sort ascending, drop floor(alpha*n) values from
/// each end, average the rest. alpha in [0, 0.5) guarantees a non-empty core.
double trimmed_mean(std::vector<double> values, double alpha);

/// Number of values kept by the trim: n - 2*floor(alpha*n).
std::size_t trimmed_core_size(std::size_t n, double alpha);

struct HegemonyScore {
  Asn asn = 0;
  double hegemony = 0.0;
  std::uint32_t n_viewpoints = 0; // viewpoints aggregated, before trimming
  std::uint32_t n_trimmed = 0;    // viewpoints kept after trimming
  bool low_confidence = false;
};

struct HegemonyResult {
  GraphScope scope;
  double alpha = 0.0;
  std::size_t n_viewpoints = 0; // non-empty viewpoints aggregated
  bool low_confidence = false;
  std::vector<HegemonyScore> scores; // ascending ASN

  const HegemonyScore* find(Asn asn) const;
  double value(Asn asn) const; // 0 when absent
};

/// Raised when a scope retains no path from any viewpoint.
struct EmptyScopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Aggregates per-viewpoint BC into hegemony scores. Viewpoints with zero
/// retained weight are excluded; an AS missing from a viewpoint's paths
/// contributes score 0 at that viewpoint. Deterministic for any input order.
HegemonyResult aggregate_hegemony(const std::vector<PerViewpointBC>& bcs,
                                  GraphScope scope, const HegemonyConfig& config);

/// End-to-end: per-viewpoint BC over the snapshot's (optionally full-feed
/// only) viewpoints, then trimmed-mean aggregation. `jobs` only controls
/// parallelism; results are identical for any value.
HegemonyResult compute_hegemony(const Snapshot& snapshot, GraphScope scope,
                                unsigned jobs = 1);

struct GraphStats {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0; // distinct unordered adjacent ASN pairs
};

GraphStats graph_stats(const Snapshot& snapshot, GraphScope scope);

} // namespace hegemony
