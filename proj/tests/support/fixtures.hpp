#pragma once

// Shared test fixtures: topologies, snapshots, entry builders.

#include <sstream>
#include <string>
#include <vector>

#include "hegemony/core.hpp"
#include "hegemony/rng.hpp"
#include "hegemony/simulator.hpp"
#include "hegemony/text_format.hpp"

namespace fixtures {

using namespace hegemony;

inline IpPrefix pfx(const std::string& text) {
  auto p = IpPrefix::parse(text);
  if (!p)
    throw std::invalid_argument("bad fixture prefix: " + text);
  return *p;
}

inline RawPath raw_path(std::initializer_list<Asn> asns) {
  RawPath p;
  for (Asn a : asns)
    p.push_back(PathSegment::plain(a));
  return p;
}

inline RibEntry entry(const std::string& collector, const std::string& ip, Asn peer,
                      const std::string& prefix, std::initializer_list<Asn> path,
                      std::uint64_t ts = 1496275200) {
  RibEntry e;
  e.viewpoint = {collector, ip, peer};
  e.prefix = pfx(prefix);
  e.path = raw_path(path);
  e.timestamp = ts;
  return e;
}

inline Snapshot build_snapshot(std::vector<RibEntry> entries, HegemonyConfig config) {
  SnapshotBuilder builder(config);
  for (auto& e : entries)
    builder.add(std::move(e));
  return builder.finish();
}

inline HegemonyConfig toy_config(double alpha, bool weighted) {
  HegemonyConfig c;
  c.alpha = alpha;
  c.weighted = weighted ? WeightedMode::on : WeightedMode::off;
  c.full_feed_only = false;
  c.min_viewpoints = 1;
  return c;
}

/// 13-node two-level hierarchy: transit 1; regionals 2, 3, 4; stubs 5..13.
/// Stub 7 is multihomed to regionals 3 and 4; viewpoints sit on stubs
/// 5, 6 and 7.
inline ToyTopology hierarchy13() {
  ToyTopology t;
  t.add_edge(1, 2);
  t.add_edge(1, 3);
  t.add_edge(1, 4);
  t.add_edge(2, 6);
  t.add_edge(2, 8);
  t.add_edge(2, 9);
  t.add_edge(3, 5);
  t.add_edge(3, 7);
  t.add_edge(3, 11);
  t.add_edge(4, 7);
  t.add_edge(4, 10);
  t.add_edge(4, 12);
  t.add_edge(4, 13);
  t.viewpoints = {5, 6, 7};
  return t;
}

inline const Asn kTransit13 = 1;
inline const std::vector<Asn> kRegionals13{2, 3, 4};
inline const std::vector<Asn> kStubs13{5, 6, 7, 8, 9, 10, 11, 12, 13};

/// Pure 3/3/3 tree: transit 1, regionals 2..4, three single-homed stubs each.
inline ToyTopology tree13() {
  ToyTopology t;
  for (Asn r : {2, 3, 4})
    t.add_edge(1, r);
  Asn stub = 5;
  for (Asn r : {2, 3, 4})
    for (int i = 0; i < 3; ++i)
      t.add_edge(r, stub++);
  t.viewpoints = {5, 8, 11};
  return t;
}

/// Random connected topology: random tree plus extra edges.
inline ToyTopology random_connected(Rng& rng, std::size_t n, std::size_t extra_edges,
                                    std::size_t viewpoint_count) {
  ToyTopology t;
  std::vector<Asn> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back(Asn(10 + i));
  for (std::size_t i = 1; i < n; ++i)
    t.add_edge(nodes[i], nodes[rng.below(i)]);
  for (std::size_t e = 0; e < extra_edges; ++e) {
    Asn a = nodes[rng.below(n)];
    Asn b = nodes[rng.below(n)];
    if (a != b)
      t.add_edge(a, b);
  }
  auto pool = nodes;
  shuffle(pool, rng);
  viewpoint_count = std::min(viewpoint_count, pool.size());
  t.viewpoints.assign(pool.begin(), pool.begin() + std::ptrdiff_t(viewpoint_count));
  std::sort(t.viewpoints.begin(), t.viewpoints.end());
  return t;
}

/// Random small snapshot: a random topology rendered to RIB entries,
/// unweighted semantics (one /24 per destination).
inline Snapshot random_snapshot(Rng& rng, std::size_t max_nodes,
                                std::size_t max_viewpoints, double alpha) {
  std::size_t n = 3 + rng.below(max_nodes - 2);
  std::size_t vps = 1 + rng.below(std::min(max_viewpoints, n));
  auto topo = random_connected(rng, n, rng.below(n), vps);
  auto config = toy_config(alpha, false);
  return build_snapshot(to_rib_entries(topo), config);
}

/// Parses inline text-format fixtures.
inline std::vector<RibEntry> entries_from_text(const std::string& text) {
  std::istringstream in(text);
  TextStats stats;
  return parse_text_all(in, stats);
}

} // namespace fixtures
