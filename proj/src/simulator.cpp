#include "hegemony/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hegemony/rng.hpp"

namespace hegemony {

void ToyTopology::add_edge(Asn a, Asn b) {
  if (a == b)
    return;
  edges.emplace_back(std::min(a, b), std::max(a, b));
  for (Asn x : {a, b}) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it == nodes.end() || *it != x)
      nodes.insert(it, x);
  }
}

namespace {

/// Indexed view of a topology with all-pairs hop distances.
struct Mesh {
  std::vector<Asn> nodes;             // ascending
  std::vector<std::vector<int>> adj;  // neighbor indices, ascending
  std::vector<std::vector<std::uint16_t>> dist;

  static constexpr std::uint16_t kUnreachable = 0xffff;

  explicit Mesh(const ToyTopology& topo) {
    nodes = topo.nodes;
    adj.resize(nodes.size());
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : topo.edges) {
      int i = index_of(a), j = index_of(b);
      if (i < 0 || j < 0 || i == j)
        continue;
      if (seen.insert({std::min(i, j), std::max(i, j)}).second) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
    for (auto& v : adj)
      std::sort(v.begin(), v.end());
    dist.resize(nodes.size());
    for (std::size_t s = 0; s < nodes.size(); ++s)
      dist[s] = bfs(int(s));
  }

  int index_of(Asn a) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), a);
    return it != nodes.end() && *it == a ? int(it - nodes.begin()) : -1;
  }

  std::vector<std::uint16_t> bfs(int from) const {
    std::vector<std::uint16_t> d(nodes.size(), kUnreachable);
    std::deque<int> queue{from};
    d[std::size_t(from)] = 0;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (int n : adj[std::size_t(cur)])
        if (d[std::size_t(n)] == kUnreachable) {
          d[std::size_t(n)] = std::uint16_t(d[std::size_t(cur)] + 1);
          queue.push_back(n);
        }
    }
    return d;
  }

  bool connected() const {
    if (nodes.empty())
      return false;
    for (auto d : dist[0])
      if (d == kUnreachable)
        return false;
    return true;
  }

  // Lexicographically smallest shortest path src -> dst, as node indices.
  // Greedy over ascending neighbors is optimal for fixed-length sequences.
  std::vector<int> path(int src, int dst) const {
    std::vector<int> p{src};
    int remaining = dist[std::size_t(dst)][std::size_t(src)];
    int cur = src;
    while (cur != dst) {
      for (int n : adj[std::size_t(cur)]) {
        if (dist[std::size_t(dst)][std::size_t(n)] == remaining - 1) {
          cur = n;
          break;
        }
      }
      p.push_back(cur);
      --remaining;
    }
    return p;
  }
};

// per-source path-through counts; sigma[s][v] = paths from s crossing v
std::vector<std::vector<std::uint32_t>> source_sigma(const Mesh& mesh,
                                                     const std::vector<int>& sources) {
  std::vector<std::vector<std::uint32_t>> sigma(
      sources.size(), std::vector<std::uint32_t>(mesh.nodes.size(), 0));
  for (std::size_t si = 0; si < sources.size(); ++si)
    for (int dst = 0; dst < int(mesh.nodes.size()); ++dst) {
      if (dst == sources[si])
        continue;
      for (int v : mesh.path(sources[si], dst))
        ++sigma[si][std::size_t(v)];
    }
  return sigma;
}

std::map<Asn, double> bc_from_sources(const ToyTopology& topo,
                                      const std::vector<Asn>& source_asns) {
  topo.validate();
  Mesh mesh(topo);
  std::vector<int> sources;
  for (Asn a : source_asns)
    sources.push_back(mesh.index_of(a));
  auto sigma = source_sigma(mesh, sources);
  double paths_per_source = double(mesh.nodes.size() - 1);
  std::map<Asn, double> out;
  std::vector<double> values(sources.size());
  for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
    for (std::size_t si = 0; si < sources.size(); ++si)
      values[si] = double(sigma[si][v]) / paths_per_source;
    out[mesh.nodes[v]] = trimmed_mean(values, 0.0);
  }
  return out;
}

} // namespace

bool ToyTopology::connected() const {
  return !nodes.empty() && Mesh(*this).connected();
}

void ToyTopology::validate() const {
  if (nodes.size() < 2)
    throw std::invalid_argument("topology needs at least two nodes");
  if (!connected())
    throw std::invalid_argument("topology is not connected");
  for (Asn v : viewpoints)
    if (!std::binary_search(nodes.begin(), nodes.end(), v))
      throw std::invalid_argument("viewpoint " + std::to_string(v)
                                  + " is not a topology node");
}

std::map<Asn, std::vector<Asn>> select_paths(const ToyTopology& topo, Asn source) {
  topo.validate();
  Mesh mesh(topo);
  int src = mesh.index_of(source);
  if (src < 0)
    throw std::invalid_argument("source is not a topology node");
  std::map<Asn, std::vector<Asn>> out;
  for (int dst = 0; dst < int(mesh.nodes.size()); ++dst) {
    if (dst == src)
      continue;
    std::vector<Asn> path;
    for (int v : mesh.path(src, dst))
      path.push_back(mesh.nodes[std::size_t(v)]);
    out[mesh.nodes[std::size_t(dst)]] = std::move(path);
  }
  return out;
}

std::map<Asn, double> expected_bc(const ToyTopology& topo) {
  return bc_from_sources(topo, topo.nodes);
}

std::map<Asn, double> sampled_bc(const ToyTopology& topo,
                                 const std::vector<Asn>& viewpoints) {
  if (viewpoints.empty())
    throw std::invalid_argument("sampled_bc needs at least one viewpoint");
  return bc_from_sources(topo, viewpoints);
}

std::vector<RibEntry> to_rib_entries(const ToyTopology& topo,
                                     const std::string& collector) {
  topo.validate();
  Mesh mesh(topo);
  std::vector<RibEntry> entries;
  auto prefix_of = [&](int idx) {
    IpPrefix p;
    p.family = AddressFamily::ipv4;
    p.addr = {10, std::uint8_t(idx / 256), std::uint8_t(idx % 256), 0};
    p.len = 24;
    return p;
  };
  for (Asn vp : topo.viewpoints) {
    int v = mesh.index_of(vp);
    std::string peer_ip = "10.255." + std::to_string(v / 256) + "."
                          + std::to_string(v % 256);
    for (int dst = 0; dst < int(mesh.nodes.size()); ++dst) {
      if (dst == v)
        continue;
      RibEntry e;
      e.viewpoint = {collector, peer_ip, vp};
      e.prefix = prefix_of(dst);
      for (int hop : mesh.path(v, dst))
        e.path.push_back(PathSegment::plain(mesh.nodes[std::size_t(hop)]));
      e.timestamp = 0;
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

ToyTopology parse_topology(std::istream& in) {
  ToyTopology topo;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first))
      continue;
    auto bad = [&] {
      throw std::invalid_argument("topology line " + std::to_string(line_no)
                                  + ": expected `asn asn` or `viewpoint asn`");
    };
    if (first == "viewpoint" || first == "vp") {
      Asn v;
      if (!(ls >> v))
        bad();
      topo.viewpoints.push_back(v);
    } else {
      Asn a, b;
      std::istringstream fs(first);
      if (!(fs >> a) || !(ls >> b))
        bad();
      topo.add_edge(a, b);
    }
    std::string extra;
    if (ls >> extra)
      bad();
  }
  std::sort(topo.viewpoints.begin(), topo.viewpoints.end());
  topo.viewpoints.erase(std::unique(topo.viewpoints.begin(), topo.viewpoints.end()),
                        topo.viewpoints.end());
  return topo;
}

ToyTopology two_level_hierarchy(const HierarchyParams& params) {
  if (params.transits == 0 || params.regionals == 0 || params.stubs == 0)
    throw std::invalid_argument("hierarchy needs all three tiers");
  Rng rng(mix_seed(params.seed, 0x7079, params.transits));
  ToyTopology topo;
  Asn first_transit = 1;
  Asn first_regional = Asn(first_transit + params.transits);
  Asn first_stub = Asn(first_regional + params.regionals);
  for (std::size_t i = 0; i < params.transits; ++i)
    for (std::size_t j = i + 1; j < params.transits; ++j)
      topo.add_edge(Asn(first_transit + i), Asn(first_transit + j));
  if (params.transits == 1 && params.regionals == 1)
    topo.add_edge(first_transit, first_regional);
  for (std::size_t r = 0; r < params.regionals; ++r) {
    Asn regional = Asn(first_regional + r);
    Asn up = Asn(first_transit + rng.below(params.transits));
    topo.add_edge(regional, up);
    if (params.transits > 1 && rng.unit() < params.multihome_prob) {
      Asn up2;
      do {
        up2 = Asn(first_transit + rng.below(params.transits));
      } while (up2 == up);
      topo.add_edge(regional, up2);
    }
  }
  for (std::size_t s = 0; s < params.stubs; ++s) {
    Asn stub = Asn(first_stub + s);
    Asn up = Asn(first_regional + rng.below(params.regionals));
    topo.add_edge(stub, up);
    if (params.regionals > 1 && rng.unit() < params.multihome_prob) {
      Asn up2;
      do {
        up2 = Asn(first_regional + rng.below(params.regionals));
      } while (up2 == up);
      topo.add_edge(stub, up2);
    }
  }
  std::vector<Asn> stubs;
  for (std::size_t s = 0; s < params.stubs; ++s)
    stubs.push_back(Asn(first_stub + s));
  shuffle(stubs, rng);
  std::size_t nvp = std::min(params.viewpoint_stubs, stubs.size());
  topo.viewpoints.assign(stubs.begin(), stubs.begin() + std::ptrdiff_t(nvp));
  std::sort(topo.viewpoints.begin(), topo.viewpoints.end());
  return topo;
}

// -- robustness experiment -----------------------------------------------------

const char* to_string(KlMetric m) {
  return m == KlMetric::bc ? "bc" : "hegemony";
}

PathStatsSet path_stats_from_topology(const ToyTopology& topo) {
  topo.validate();
  if (topo.viewpoints.empty())
    throw std::invalid_argument("topology has no viewpoints");
  Mesh mesh(topo);
  std::vector<int> sources;
  for (Asn vp : topo.viewpoints)
    sources.push_back(mesh.index_of(vp));
  auto sigma = source_sigma(mesh, sources);
  PathStatsSet stats;
  stats.universe = mesh.nodes;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    ViewpointPathStats vps;
    int v = sources[si];
    vps.id = {"sim", "10.255." + std::to_string(v / 256) + "." + std::to_string(v % 256),
              topo.viewpoints[si]};
    vps.path_count = mesh.nodes.size() - 1;
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n)
      if (sigma[si][n] > 0)
        vps.sigma.emplace_back(mesh.nodes[n], sigma[si][n]);
    stats.viewpoints.push_back(std::move(vps));
  }
  return stats;
}

PathStatsSet path_stats_from_snapshot(const Snapshot& snapshot) {
  PathStatsSet stats;
  std::set<Asn> universe;
  for (const auto& rib : snapshot.viewpoints) {
    if (snapshot.config.full_feed_only && !rib.info.full_feed)
      continue;
    ViewpointPathStats vps;
    vps.id = rib.info.id;
    std::map<Asn, std::uint64_t> sigma;
    for (const auto& [prefix, path] : rib.routes) {
      ++vps.path_count;
      for (Asn a : path.asns)
        ++sigma[a];
    }
    if (vps.path_count == 0)
      continue;
    vps.sigma.assign(sigma.begin(), sigma.end());
    for (const auto& [asn, s] : vps.sigma)
      universe.insert(asn);
    stats.viewpoints.push_back(std::move(vps));
  }
  stats.universe.assign(universe.begin(), universe.end());
  return stats;
}

std::vector<double> score_histogram(const std::vector<double>& values, int bins,
                                    double epsilon) {
  std::vector<double> mass(std::size_t(bins), 0.0);
  for (double v : values) {
    int b = std::min(bins - 1, std::max(0, int(v * bins)));
    mass[std::size_t(b)] += 1.0;
  }
  double total = double(values.size());
  double smoothed_total = 0.0;
  for (auto& m : mass) {
    m = (total > 0 ? m / total : 0.0) + epsilon;
    smoothed_total += m;
  }
  for (auto& m : mass)
    m /= smoothed_total;
  return mass;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0)
      kl += p[i] * std::log(p[i] / q[i]);
  return kl;
}

namespace {

// Metric scores over the universe for a subset of viewpoint indices.
std::vector<double> metric_scores(const PathStatsSet& stats,
                                  const std::vector<std::size_t>& subset,
                                  KlMetric metric, double alpha) {
  std::unordered_map<Asn, std::size_t> universe_index;
  universe_index.reserve(stats.universe.size());
  for (std::size_t i = 0; i < stats.universe.size(); ++i)
    universe_index[stats.universe[i]] = i;
  std::vector<double> scores(stats.universe.size(), 0.0);
  if (metric == KlMetric::bc) {
    // pooled: sigma and S summed across the subset's paths
    std::uint64_t total = 0;
    std::vector<std::uint64_t> sigma(stats.universe.size(), 0);
    for (auto j : subset) {
      total += stats.viewpoints[j].path_count;
      for (const auto& [asn, s] : stats.viewpoints[j].sigma)
        sigma[universe_index.at(asn)] += s;
    }
    for (std::size_t i = 0; i < scores.size(); ++i)
      scores[i] = double(sigma[i]) / double(total);
  } else {
    std::size_t n = 0;
    std::vector<std::vector<double>> per_as(stats.universe.size());
    for (auto j : subset) {
      const auto& vp = stats.viewpoints[j];
      if (vp.path_count == 0)
        continue;
      ++n;
      for (const auto& [asn, s] : vp.sigma)
        per_as[universe_index.at(asn)].push_back(double(s) / double(vp.path_count));
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      auto& values = per_as[i];
      values.resize(n, 0.0); // viewpoints without the AS contribute zeros
      scores[i] = trimmed_mean(std::move(values), alpha);
    }
  }
  return scores;
}

// k viewpoints drawn round-robin across collectors, each collector's pool
// shuffled; mirrors cross-project random peer selection.
std::vector<std::size_t> stratified_sample(const PathStatsSet& stats, std::size_t k,
                                           Rng& rng) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < stats.viewpoints.size(); ++i)
    groups[stats.viewpoints[i].id.collector].push_back(i);
  std::vector<std::vector<std::size_t>> pools;
  for (auto& [name, members] : groups) {
    shuffle(members, rng);
    pools.push_back(std::move(members));
  }
  std::vector<std::size_t> picked;
  std::size_t round = 0;
  while (picked.size() < k) {
    bool any = false;
    for (auto& pool : pools) {
      if (round < pool.size()) {
        picked.push_back(pool[round]);
        any = true;
        if (picked.size() == k)
          break;
      }
    }
    if (!any)
      break;
    ++round;
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

} // namespace

KlResult kl_experiment(const PathStatsSet& stats, const KlParams& params,
                       KlMetric metric) {
  if (stats.viewpoints.empty())
    throw std::invalid_argument("no viewpoints available");
  KlResult result;
  std::vector<std::size_t> all(stats.viewpoints.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  auto full = score_histogram(metric_scores(stats, all, metric, params.alpha),
                              params.bins, params.epsilon);
  for (std::size_t k : params.ks) {
    if (k > stats.viewpoints.size() || k == 0) {
      result.skipped_ks.push_back(k);
      continue;
    }
    for (std::size_t trial = 0; trial < params.trials; ++trial) {
      Rng rng(mix_seed(params.seed, k, trial));
      auto subset = stratified_sample(stats, k, rng);
      auto hist = score_histogram(metric_scores(stats, subset, metric, params.alpha),
                                  params.bins, params.epsilon);
      result.rows.push_back({metric, k, trial, kl_divergence(hist, full)});
    }
  }
  return result;
}

} // namespace hegemony
