#include "hegemony/sweep.hpp"

#include <algorithm>
#include <unordered_map>

#include "hegemony/parallel.hpp"

namespace hegemony {

namespace {

struct OriginAccumulator {
  AddrCount total_weight = 0;
  std::uint64_t path_count = 0;
  std::unordered_map<Asn, AddrCount> sigma;
};

} // namespace

std::map<Asn, HegemonyResult> sweep(const Snapshot& snapshot,
                                    const SweepOptions& options, unsigned jobs,
                                    SweepInfo* info) {
  const auto& config = snapshot.config;
  bool weighted = config.weighting_enabled();
  std::vector<const ViewpointRib*> ribs;
  for (const auto& rib : snapshot.viewpoints)
    if (!config.full_feed_only || rib.info.full_feed)
      ribs.push_back(&rib);

  // Cost estimate per origin: path-ASN slots it would occupy, across all
  // viewpoints. Drives the shard split.
  std::map<Asn, std::uint64_t> origin_cost;
  for (const auto* rib : ribs)
    for (const auto& [prefix, path] : rib->routes)
      origin_cost[path.origin()] += path.asns.size();

  std::vector<std::pair<Asn, Asn>> shards; // inclusive origin ranges
  {
    std::uint64_t acc = 0;
    Asn lo = 0;
    bool open = false;
    for (const auto& [origin, cost] : origin_cost) {
      if (!open) {
        lo = origin;
        open = true;
        acc = 0;
      }
      acc += cost;
      if (acc > options.max_slots) {
        shards.emplace_back(lo, origin);
        open = false;
      }
    }
    if (open)
      shards.emplace_back(lo, origin_cost.rbegin()->first);
  }
  if (info) {
    info->origins = origin_cost.size();
    info->shards = shards.size();
  }
  if (options.log && shards.size() > 1)
    options.log("local sweep: " + std::to_string(origin_cost.size()) + " origins in "
                + std::to_string(shards.size()) + " passes");

  std::map<Asn, HegemonyResult> results;
  for (auto [shard_lo, shard_hi] : shards) {
    // map phase: per (viewpoint, origin) running sums, viewpoints in
    // snapshot order
    std::vector<std::map<Asn, OriginAccumulator>> per_vp(ribs.size());
    parallel_for(ribs.size(), jobs, [&, lo = shard_lo, hi = shard_hi](std::size_t i) {
      auto& accs = per_vp[i];
      for (const auto& [prefix, path] : ribs[i]->routes) {
        Asn origin = path.origin();
        if (origin < lo || origin > hi)
          continue;
        AddrCount weight = 1;
        if (weighted) {
          auto w = ribs[i]->trie->exclusive_count(prefix);
          if (!w)
            throw std::logic_error("prefix missing from trie: " + prefix.to_string());
          weight = *w;
        }
        auto& acc = accs[origin];
        ++acc.path_count;
        acc.total_weight += weight;
        for (Asn a : path.asns)
          acc.sigma[a] += weight;
      }
    });

    std::vector<Asn> origins;
    for (const auto& [origin, cost] : origin_cost)
      if (origin >= shard_lo && origin <= shard_hi)
        origins.push_back(origin);

    // reduce phase: per origin, assemble per-viewpoint BC and aggregate;
    // identical arithmetic to per_viewpoint_bc + aggregate_hegemony
    std::vector<HegemonyResult> shard_results(origins.size());
    parallel_for(origins.size(), jobs, [&](std::size_t oi) {
      Asn origin = origins[oi];
      std::vector<PerViewpointBC> bcs;
      for (std::size_t i = 0; i < ribs.size(); ++i) {
        auto it = per_vp[i].find(origin);
        if (it == per_vp[i].end())
          continue;
        const auto& acc = it->second;
        PerViewpointBC bc;
        bc.viewpoint = ribs[i]->info.id;
        bc.total_weight = acc.total_weight;
        bc.path_count = acc.path_count;
        if (acc.total_weight != 0) {
          double denom = to_double(acc.total_weight);
          bc.scores.reserve(acc.sigma.size());
          for (const auto& [asn, s] : acc.sigma)
            bc.scores.emplace_back(asn, to_double(s) / denom);
          std::sort(bc.scores.begin(), bc.scores.end());
        }
        bcs.push_back(std::move(bc));
      }
      shard_results[oi] = aggregate_hegemony(bcs, GraphScope::local(origin), config);
    });
    for (std::size_t oi = 0; oi < origins.size(); ++oi)
      results.emplace(origins[oi], std::move(shard_results[oi]));
  }
  return results;
}

std::vector<LocalSummary> summarize_local(const std::map<Asn, HegemonyResult>& results,
                                          double threshold) {
  std::vector<LocalSummary> out;
  out.reserve(results.size());
  for (const auto& [origin, result] : results) {
    LocalSummary s;
    s.origin = origin;
    for (const auto& score : result.scores) {
      if (score.asn == origin)
        continue;
      ++s.nodes;
      if (score.hegemony == 0.0)
        ++s.zero_hegemony;
      if (score.hegemony > threshold)
        ++s.above_threshold;
    }
    out.push_back(s);
  }
  return out;
}

} // namespace hegemony
