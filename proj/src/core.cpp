#include "hegemony/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hegemony/parallel.hpp"

namespace hegemony {

ViewpointRib make_viewpoint_rib(Viewpoint info,
                                std::vector<std::pair<IpPrefix, CleanPath>> routes,
                                bool build_trie) {
  std::map<IpPrefix, CleanPath> dedup;
  for (auto& [prefix, path] : routes) {
    if (prefix.family != routes.front().first.family)
      throw std::invalid_argument("mixed address families in one viewpoint rib");
    dedup[prefix] = std::move(path); // last wins
  }
  ViewpointRib rib;
  rib.info = std::move(info);
  rib.routes.assign(std::make_move_iterator(dedup.begin()),
                    std::make_move_iterator(dedup.end()));
  if (build_trie) {
    PrefixTrie trie(rib.routes.empty()
                        ? 32
                        : family_bits(rib.routes.front().first.family));
    for (std::uint32_t i = 0; i < rib.routes.size(); ++i)
      trie.insert(rib.routes[i].first, i);
    trie.finalize();
    rib.trie = std::move(trie);
  }
  return rib;
}

std::size_t Snapshot::full_feed_count() const {
  std::size_t n = 0;
  for (const auto& rib : viewpoints)
    n += rib.info.full_feed;
  return n;
}

SnapshotBuilder::SnapshotBuilder(HegemonyConfig config) : config_(config) {
  config_.validate();
}

void SnapshotBuilder::add(RibEntry&& entry) {
  ++counters_.entries_added;
  if (entry.prefix.family != config_.family) {
    ++counters_.other_family;
    return;
  }
  if (!saw_entry_ || entry.timestamp < min_timestamp_) {
    min_timestamp_ = entry.timestamp;
    saw_entry_ = true;
  }
  auto& routes = raw_[std::move(entry.viewpoint)];
  auto [it, inserted] = routes.try_emplace(entry.prefix, std::move(entry.path));
  if (!inserted) {
    ++counters_.duplicates_replaced;
    it->second = std::move(entry.path);
  }
}

Snapshot SnapshotBuilder::finish(unsigned jobs) {
  Snapshot snap;
  snap.config = config_;
  snap.min_timestamp = min_timestamp_;
  snap.viewpoints.reserve(raw_.size());
  for (auto& [id, routes] : raw_) {
    ViewpointRib rib;
    rib.info.id = id;
    rib.info.family = config_.family;
    rib.info.route_count = routes.size(); // distinct prefixes in the raw feed
    rib.routes.reserve(routes.size());
    for (auto& [prefix, raw_path] : routes) {
      if (prefix.is_default_route()) {
        ++counters_.default_routes;
        continue;
      }
      auto outcome = normalize_path(raw_path, config_.normalize);
      if (!outcome.ok()) {
        switch (outcome.reason) {
          case RejectReason::as_set: ++counters_.rejected_as_set; break;
          case RejectReason::loop: ++counters_.rejected_loop; break;
          case RejectReason::reserved_asn: ++counters_.rejected_reserved_asn; break;
          default: ++counters_.rejected_empty; break;
        }
        continue;
      }
      ++counters_.clean_routes;
      rib.routes.emplace_back(prefix, std::move(*outcome.path));
    }
    snap.viewpoints.push_back(std::move(rib));
  }
  raw_.clear();

  if (config_.weighting_enabled()) {
    parallel_for(snap.viewpoints.size(), jobs, [&](std::size_t i) {
      auto& rib = snap.viewpoints[i];
      PrefixTrie trie(family_bits(config_.family));
      for (std::uint32_t r = 0; r < rib.routes.size(); ++r)
        trie.insert(rib.routes[r].first, r);
      trie.finalize();
      rib.trie = std::move(trie);
    });
  }

  std::vector<Viewpoint> infos;
  infos.reserve(snap.viewpoints.size());
  for (const auto& rib : snap.viewpoints)
    infos.push_back(rib.info);
  classify_full_feed(infos, config_.full_feed_fraction);
  for (std::size_t i = 0; i < infos.size(); ++i)
    snap.viewpoints[i].info = infos[i];

  snap.counters = counters_;
  return snap;
}

PerViewpointBC per_viewpoint_bc(const ViewpointRib& rib, GraphScope scope,
                                const PrefixTrie* trie, bool weighted) {
  if (weighted && !trie)
    throw std::invalid_argument("weighted BC requires a prefix trie");
  PerViewpointBC bc;
  bc.viewpoint = rib.info.id;
  std::unordered_map<Asn, AddrCount> sigma;
  for (const auto& [prefix, path] : rib.routes) {
    if (!scope.retains(path))
      continue;
    AddrCount weight = 1;
    if (weighted) {
      auto w = trie->exclusive_count(prefix);
      if (!w)
        throw std::logic_error("prefix missing from trie: " + prefix.to_string());
      weight = *w;
    }
    ++bc.path_count;
    bc.total_weight += weight;
    for (Asn a : path.asns)
      sigma[a] += weight;
  }
  if (bc.total_weight == 0)
    return bc;
  double denom = to_double(bc.total_weight);
  bc.scores.reserve(sigma.size());
  for (const auto& [asn, s] : sigma)
    bc.scores.emplace_back(asn, to_double(s) / denom);
  std::sort(bc.scores.begin(), bc.scores.end());
  return bc;
}

std::size_t trimmed_core_size(std::size_t n, double alpha) {
  auto drop = std::size_t(std::floor(alpha * double(n)));
  return n - 2 * drop;
}

double trimmed_mean(std::vector<double> values, double alpha) {
  if (values.empty())
    throw std::invalid_argument("trimmed_mean of no values");
  std::sort(values.begin(), values.end());
  auto drop = std::size_t(std::floor(alpha * double(values.size())));
  std::size_t keep = values.size() - 2 * drop;
  double sum = 0.0;
  for (std::size_t i = drop; i < drop + keep; ++i)
    sum += values[i];
  return sum / double(keep);
}

namespace {

// Trimmed mean of a value multiset given as (ascending positives, count of
// zeros). Summation order matches trimmed_mean exactly: zeros first, then
// positives ascending, so results are bit-identical.
double trimmed_mean_with_zeros(const std::vector<double>& positive_asc,
                               std::size_t zeros, double alpha) {
  std::size_t n = positive_asc.size() + zeros;
  auto drop = std::size_t(std::floor(alpha * double(n)));
  std::size_t keep = n - 2 * drop;
  // kept positives occupy [max(drop, zeros), n - drop) of the conceptual
  // sorted vector
  std::size_t lo = std::max(drop, zeros) - zeros;
  std::size_t hi = (n - drop) - zeros; // > lo unless every kept value is zero
  double sum = 0.0;
  for (std::size_t i = lo; i < hi && i < positive_asc.size(); ++i)
    sum += positive_asc[i];
  return sum / double(keep);
}

} // namespace

const HegemonyScore* HegemonyResult::find(Asn asn) const {
  auto it = std::lower_bound(scores.begin(), scores.end(), asn,
                             [](const HegemonyScore& s, Asn a) { return s.asn < a; });
  return it != scores.end() && it->asn == asn ? &*it : nullptr;
}

double HegemonyResult::value(Asn asn) const {
  const auto* s = find(asn);
  return s ? s->hegemony : 0.0;
}

HegemonyResult aggregate_hegemony(const std::vector<PerViewpointBC>& bcs,
                                  GraphScope scope, const HegemonyConfig& config) {
  std::vector<const PerViewpointBC*> used;
  for (const auto& bc : bcs)
    if (!bc.empty())
      used.push_back(&bc);
  std::sort(used.begin(), used.end(), [](const PerViewpointBC* a, const PerViewpointBC* b) {
    return a->viewpoint < b->viewpoint;
  });
  if (used.empty())
    throw EmptyScopeError("no viewpoint retains any path for scope "
                          + scope.to_string());

  std::size_t n = used.size();
  // Per AS: the positive per-viewpoint scores; the remaining viewpoints
  // contribute zeros (absence is information).
  std::map<Asn, std::vector<double>> positives;
  for (const auto* bc : used)
    for (const auto& [asn, score] : bc->scores)
      if (score > 0.0)
        positives[asn].push_back(score);
      else
        positives[asn]; // an AS seen only on zero-weight paths still appears

  HegemonyResult result;
  result.scope = scope;
  result.alpha = config.alpha;
  result.n_viewpoints = n;
  result.low_confidence = n < config.min_viewpoints;
  auto kept = std::uint32_t(trimmed_core_size(n, config.alpha));
  result.scores.reserve(positives.size());
  for (auto& [asn, values] : positives) {
    std::sort(values.begin(), values.end());
    HegemonyScore s;
    s.asn = asn;
    s.hegemony = trimmed_mean_with_zeros(values, n - values.size(), config.alpha);
    s.n_viewpoints = std::uint32_t(n);
    s.n_trimmed = kept;
    s.low_confidence = result.low_confidence;
    result.scores.push_back(s);
  }
  return result;
}

HegemonyResult compute_hegemony(const Snapshot& snapshot, GraphScope scope,
                                unsigned jobs) {
  const auto& config = snapshot.config;
  bool weighted = config.weighting_enabled();
  std::vector<const ViewpointRib*> ribs;
  for (const auto& rib : snapshot.viewpoints)
    if (!config.full_feed_only || rib.info.full_feed)
      ribs.push_back(&rib);
  std::vector<PerViewpointBC> bcs(ribs.size());
  parallel_for(ribs.size(), jobs, [&](std::size_t i) {
    bcs[i] = per_viewpoint_bc(*ribs[i], scope,
                              ribs[i]->trie ? &*ribs[i]->trie : nullptr, weighted);
  });
  return aggregate_hegemony(bcs, scope, config);
}

GraphStats graph_stats(const Snapshot& snapshot, GraphScope scope) {
  std::unordered_set<Asn> nodes;
  std::unordered_set<std::uint64_t> edges;
  for (const auto& rib : snapshot.viewpoints) {
    if (snapshot.config.full_feed_only && !rib.info.full_feed)
      continue;
    for (const auto& [prefix, path] : rib.routes) {
      if (!scope.retains(path))
        continue;
      for (std::size_t i = 0; i < path.asns.size(); ++i) {
        nodes.insert(path.asns[i]);
        if (i + 1 < path.asns.size()) {
          Asn a = std::min(path.asns[i], path.asns[i + 1]);
          Asn b = std::max(path.asns[i], path.asns[i + 1]);
          edges.insert(std::uint64_t(a) << 32 | b);
        }
      }
    }
  }
  return {nodes.size(), edges.size()};
}

} // namespace hegemony
