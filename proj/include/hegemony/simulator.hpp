#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hegemony/core.hpp"
#include "hegemony/types.hpp"

namespace hegemony {

/// A synthetic AS topology: undirected edges, a viewpoint subset, and
/// deterministic shortest-path route selection standing in for BGP.
struct ToyTopology {
  std::vector<Asn> nodes;                  // ascending, unique
  std::vector<std::pair<Asn, Asn>> edges;  // unordered pairs
  std::vector<Asn> viewpoints;             // subset of nodes

  void add_edge(Asn a, Asn b);
  bool connected() const;
  /// Throws std::invalid_argument when disconnected or viewpoints are not nodes.
  void validate() const;
};

/// Best path from `source` to every other node: shortest by hop count, ties
/// broken by the lexicographically smallest ASN sequence. Paths include both
/// endpoints, source first.
std::map<Asn, std::vector<Asn>> select_paths(const ToyTopology& topo, Asn source);

/// BC with full knowledge: every ordered (source, destination) pair
/// contributes its selected path, endpoints included. Reported per node as
/// the mean over sources of that source's path fraction; with equal path
/// counts per source this equals sigma/S.
std::map<Asn, double> expected_bc(const ToyTopology& topo);

/// BC restricted to paths bound to the viewpoint set (BGP-style convergent
/// sampling). With the full node set as viewpoints this equals expected_bc.
std::map<Asn, double> sampled_bc(const ToyTopology& topo,
                                 const std::vector<Asn>& viewpoints);

/// Renders each viewpoint's route table as RibEntries: one /24 per
/// destination node, path running viewpoint first, origin last.
std::vector<RibEntry> to_rib_entries(const ToyTopology& topo,
                                     const std::string& collector = "sim");

/// Reads edge-list text: `asn asn` per line, optional `viewpoint asn` lines,
/// `#` comments.
ToyTopology parse_topology(std::istream& in);

struct HierarchyParams {
  std::size_t transits = 4;    // full mesh
  std::size_t regionals = 30;  // each homed to 1-2 transits
  std::size_t stubs = 166;     // each homed to 1-2 regionals
  double multihome_prob = 0.15;
  std::size_t viewpoint_stubs = 60; // viewpoints placed on random stubs
  std::uint64_t seed = 1;
};

/// Generates a two-tier transit hierarchy with viewpoints on stubs.
ToyTopology two_level_hierarchy(const HierarchyParams& params);

// -- sampling-robustness experiment -------------------------------------------

/// Per-viewpoint path-through counts, the common input of both robustness
/// metrics.
struct ViewpointPathStats {
  ViewpointId id;
  std::uint64_t path_count = 0;                      // S_j
  std::vector<std::pair<Asn, std::uint64_t>> sigma;  // ascending ASN
};

struct PathStatsSet {
  std::vector<ViewpointPathStats> viewpoints;
  std::vector<Asn> universe; // every ASN appearing anywhere, ascending
};

PathStatsSet path_stats_from_topology(const ToyTopology& topo);
/// Unweighted, global-scope path counts from a snapshot (full-feed filter
/// applied per the snapshot's config).
PathStatsSet path_stats_from_snapshot(const Snapshot& snapshot);

enum class KlMetric : std::uint8_t { bc, hegemony };
const char* to_string(KlMetric m);

struct KlParams {
  std::vector<std::size_t> ks{5, 10, 20, 40};
  std::size_t trials = 30;
  std::uint64_t seed = 1;
  double alpha = 0.1;    // hegemony aggregation during the experiment
  int bins = 50;         // histogram bins on [0, 1]
  double epsilon = 1e-9; // additive smoothing before renormalizing
};

struct KlRow {
  KlMetric metric;
  std::size_t k;
  std::size_t trial;
  double kl;
};

struct KlResult {
  std::vector<KlRow> rows;
  std::vector<std::size_t> skipped_ks; // k exceeding available viewpoints
};

/// Histogram of scores in [0, 1]: `bins` uniform bins, epsilon added to every
/// bin, mass renormalized to 1.
std::vector<double> score_histogram(const std::vector<double>& values, int bins,
                                    double epsilon);

/// KL(p || q) over equally-binned smoothed histograms, natural log.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

/// For each k and trial, draws k viewpoints at random (stratified across
/// collectors), computes the metric's score distribution and its KL
/// divergence from the full-viewpoint distribution. The (seed, k, trial)
/// triple fully determines each subset.
KlResult kl_experiment(const PathStatsSet& stats, const KlParams& params,
                       KlMetric metric);

} // namespace hegemony
