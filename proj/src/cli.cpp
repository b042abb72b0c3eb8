#include "hegemony/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hegemony/manifest.hpp"
#include "hegemony/mrt.hpp"
#include "hegemony/report.hpp"
#include "hegemony/simulator.hpp"
#include "hegemony/sweep.hpp"
#include "hegemony/text_format.hpp"

namespace hegemony::cli {

namespace {

std::string collector_label(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

// Text inputs are line-oriented ASCII with '|' field separators; anything
// with control bytes (or compression magic) is treated as MRT.
std::string sniff_format(std::ifstream& in) {
  char buf[2048];
  in.read(buf, sizeof(buf));
  auto n = std::size_t(in.gcount());
  in.clear();
  in.seekg(0);
  if (n >= 2 && std::uint8_t(buf[0]) == 0x1f && std::uint8_t(buf[1]) == 0x8b)
    return "mrt";
  if (n >= 3 && buf[0] == 'B' && buf[1] == 'Z' && buf[2] == 'h')
    return "mrt";
  for (std::size_t i = 0; i < n; ++i) {
    auto c = std::uint8_t(buf[i]);
    if (c == 0 || (c < 0x09) || (c > 0x0d && c < 0x20))
      return "mrt";
  }
  return "text";
}

struct LoadResult {
  Snapshot snapshot;
  std::vector<InputRecord> inputs;
  ParseCounters parse;
};

// Parses every input into one snapshot; throws ParseError/runtime_error on
// unreadable or corrupt input.
LoadResult load_snapshot(const CommonOptions& options) {
  SnapshotBuilder builder(options.config);
  LoadResult result;
  for (const auto& path : options.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw std::runtime_error("cannot open input: " + path);
    InputRecord record;
    record.path = path;
    record.format = options.input_format == "auto" ? sniff_format(in)
                                                   : options.input_format;
    std::uint64_t before = 0;
    auto sink = [&](RibEntry&& e) {
      ++before;
      builder.add(std::move(e));
    };
    if (record.format == "text") {
      TextStats stats;
      parse_text(in, sink, stats);
      result.parse.text_bad_lines += stats.bad_lines;
      result.parse.peer_mismatch += stats.peer_mismatch;
      result.parse.ipv6_long_prefix += stats.ipv6_long_prefix;
    } else {
      MrtStats stats;
      std::string label = options.collector.empty() ? collector_label(path)
                                                    : options.collector;
      parse_mrt(in, label, sink, stats);
      result.parse.mrt_records += stats.records;
      result.parse.mrt_skipped_records += stats.skipped_records;
      result.parse.mrt_corrupt_records += stats.corrupt_records;
      result.parse.mrt_truncated_records += stats.truncated_records;
      result.parse.unknown_peer += stats.unknown_peer;
      result.parse.missing_as_path += stats.missing_as_path;
      result.parse.peer_mismatch += stats.peer_mismatch;
      result.parse.ipv6_long_prefix += stats.ipv6_long_prefix;
    }
    record.entries = before;
    record.sha256 = sha256_file(path);
    result.inputs.push_back(std::move(record));
  }
  result.snapshot = builder.finish(options.jobs);
  return result;
}

RunManifest base_manifest(const std::string& command, const CommonOptions& options,
                          const LoadResult& loaded) {
  RunManifest m;
  m.command = command;
  m.config = options.config;
  m.seed = options.seed;
  m.inputs = loaded.inputs;
  m.parse = loaded.parse;
  m.counters = loaded.snapshot.counters;
  m.viewpoints_total = loaded.snapshot.viewpoints.size();
  m.viewpoints_full_feed = loaded.snapshot.full_feed_count();
  m.min_timestamp = loaded.snapshot.min_timestamp;
  m.snapshot_date = options.date.empty() ? utc_date(loaded.snapshot.min_timestamp)
                                         : options.date;
  return m;
}

class OutputFile {
public:
  explicit OutputFile(const std::string& path) : path_(path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_)
        throw std::runtime_error("cannot write output: " + path);
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  bool is_file() const { return path_ != "-"; }
  std::string manifest_path() const { return path_ + ".manifest.json"; }

private:
  std::string path_;
  std::ofstream file_;
};

void write_manifest(const OutputFile& out, const RunManifest& manifest) {
  if (!out.is_file())
    return;
  std::ofstream mf(out.manifest_path(), std::ios::binary);
  if (!mf)
    throw std::runtime_error("cannot write manifest: " + out.manifest_path());
  mf << manifest.to_json();
}

int input_failure(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return kInputError;
}

} // namespace

int cmd_global(const GlobalOptions& options, std::ostream& err) {
  LoadResult loaded;
  try {
    loaded = load_snapshot(options);
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  auto manifest = base_manifest("global", options, loaded);
  manifest.scope = "global";
  manifest.graph = graph_stats(loaded.snapshot, GraphScope::global_scope());

  int rc = kOk;
  HegemonyResult result;
  try {
    result = compute_hegemony(loaded.snapshot, GraphScope::global_scope(),
                              options.jobs);
  } catch (const EmptyScopeError&) {
    err << "warning: no usable viewpoints; result is empty\n";
    result.scope = GraphScope::global_scope();
    result.alpha = options.config.alpha;
    rc = kEmptyResult;
  }
  manifest.viewpoints_used = result.n_viewpoints;
  std::uint64_t eligible = options.config.full_feed_only
                               ? manifest.viewpoints_full_feed
                               : manifest.viewpoints_total;
  manifest.viewpoints_empty = eligible - result.n_viewpoints;
  manifest.result_rows = result.scores.size();
  if (result.low_confidence)
    err << "warning: only " << result.n_viewpoints << " viewpoints (min "
        << options.config.min_viewpoints << "); low-confidence results\n";

  try {
    OutputFile out(options.output);
    if (options.format == "json")
      write_global_json(out.stream(), result);
    else
      write_global_csv(out.stream(), result);
    write_manifest(out, manifest);
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  return rc;
}

int cmd_local(const LocalOptions& options, std::ostream& err) {
  LoadResult loaded;
  try {
    loaded = load_snapshot(options);
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  auto manifest = base_manifest("local", options, loaded);

  std::map<Asn, HegemonyResult> results;
  if (options.all) {
    SweepOptions sweep_options;
    sweep_options.log = [&](const std::string& msg) { err << msg << "\n"; };
    results = sweep(loaded.snapshot, sweep_options, options.jobs);
    manifest.scope = "local:all";
  } else {
    for (Asn origin : options.origins) {
      if (options.config.normalize.filter_reserved_asns && is_reserved_asn(origin))
        err << "warning: origin " << origin
            << " is a reserved ASN and is filtered by the active policy\n";
      try {
        results.emplace(origin, compute_hegemony(loaded.snapshot,
                                                 GraphScope::local(origin),
                                                 options.jobs));
      } catch (const EmptyScopeError&) {
        err << "warning: origin " << origin << " has no retained path; skipped\n";
      }
    }
    std::string scope = "local:";
    for (std::size_t i = 0; i < options.origins.size(); ++i)
      scope += (i ? "," : "") + std::to_string(options.origins[i]);
    manifest.scope = scope;
  }

  std::size_t used = 0;
  for (const auto& [origin, result] : results)
    used = std::max(used, result.n_viewpoints);
  manifest.viewpoints_used = used;
  std::uint64_t eligible = options.config.full_feed_only
                               ? manifest.viewpoints_full_feed
                               : manifest.viewpoints_total;
  manifest.viewpoints_empty = eligible - used;
  std::uint64_t rows = 0;
  for (const auto& [origin, result] : results)
    rows += result.scores.size();
  manifest.result_rows = rows;

  try {
    OutputFile out(options.output);
    if (options.format == "json")
      write_local_json(out.stream(), results);
    else
      write_local_csv(out.stream(), results);
    write_manifest(out, manifest);
    if (!options.summary_output.empty()) {
      std::ofstream sf(options.summary_output, std::ios::binary);
      if (!sf)
        throw std::runtime_error("cannot write summary: " + options.summary_output);
      sf << "origin_asn,nodes,zero_hegemony,above_threshold\n";
      for (const auto& s : summarize_local(results, options.summary_threshold))
        sf << s.origin << ',' << s.nodes << ',' << s.zero_hegemony << ','
           << s.above_threshold << '\n';
    }
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  return results.empty() ? kEmptyResult : kOk;
}

int cmd_timeseries(const TimeseriesOptions& options, std::ostream& err) {
  struct Dated {
    std::string date;
    std::vector<ScoreCsvRow> rows;
  };
  std::vector<Dated> snapshots;
  bool have_config = false;
  double alpha = 0;
  bool weighted = false;
  int family = 0;

  for (std::size_t i = 0; i < options.inputs.size(); ++i) {
    const auto& path = options.inputs[i];
    std::ifstream in(path, std::ios::binary);
    if (!in)
      return input_failure(err, std::runtime_error("cannot open input: " + path));
    Dated d;
    try {
      d.rows = parse_scores_csv(in);
    } catch (const std::exception& e) {
      return input_failure(err, e);
    }
    std::ifstream mf(path + ".manifest.json", std::ios::binary);
    if (!mf) {
      if (!options.force) {
        err << "error: " << path << " has no manifest sidecar; "
            << "rerun the snapshot or pass --force\n";
        return kInputError;
      }
      d.date = "snapshot-" + std::to_string(i);
    } else {
      try {
        auto j = nlohmann::json::parse(mf);
        d.date = j.at("snapshot").at("date").get<std::string>();
        double a = j.at("config").at("alpha").get<double>();
        bool w = j.at("config").at("weighted").get<bool>();
        int f = j.at("config").at("family").get<int>();
        if (!have_config) {
          alpha = a;
          weighted = w;
          family = f;
          have_config = true;
        } else if ((a != alpha || w != weighted || f != family) && !options.force) {
          err << "error: " << path << " was produced with different settings "
              << "(alpha/weighting/family); values are not comparable. "
              << "Pass --force to concatenate anyway\n";
          return kInputError;
        }
      } catch (const nlohmann::json::exception& e) {
        if (!options.force)
          return input_failure(err, std::runtime_error(path + ".manifest.json: "
                                                       + e.what()));
        d.date = "snapshot-" + std::to_string(i);
      }
    }
    snapshots.push_back(std::move(d));
  }

  struct OutRow {
    std::string date;
    std::string scope;
    Asn asn;
    std::string hegemony;
  };
  std::vector<OutRow> rows;
  for (const auto& snap : snapshots)
    for (const auto& r : snap.rows)
      rows.push_back({snap.date, r.scope, r.asn, r.hegemony});
  std::stable_sort(rows.begin(), rows.end(), [](const OutRow& a, const OutRow& b) {
    if (a.scope != b.scope)
      return a.scope < b.scope;
    if (a.asn != b.asn)
      return a.asn < b.asn;
    return a.date < b.date;
  });

  try {
    OutputFile out(options.output);
    out.stream() << "date,scope,asn,hegemony\n";
    for (const auto& r : rows)
      out.stream() << r.date << ',' << r.scope << ',' << r.asn << ',' << r.hegemony
                   << '\n';
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  return rows.empty() ? kEmptyResult : kOk;
}

int cmd_robustness(const RobustnessOptions& options, std::ostream& err) {
  PathStatsSet stats;
  std::vector<InputRecord> input_records;
  try {
    if (!options.topology.empty()) {
      std::ifstream in(options.topology, std::ios::binary);
      if (!in)
        throw std::runtime_error("cannot open topology: " + options.topology);
      auto topo = parse_topology(in);
      if (!options.viewpoints.empty())
        topo.viewpoints = options.viewpoints;
      std::sort(topo.viewpoints.begin(), topo.viewpoints.end());
      stats = path_stats_from_topology(topo);
      InputRecord rec;
      rec.path = options.topology;
      rec.sha256 = sha256_file(options.topology);
      rec.format = "topology";
      input_records.push_back(std::move(rec));
    } else {
      auto loaded = load_snapshot(options);
      stats = path_stats_from_snapshot(loaded.snapshot);
      input_records = loaded.inputs;
    }
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  if (stats.viewpoints.empty()) {
    err << "warning: no viewpoints available; result is empty\n";
    return kEmptyResult;
  }

  KlParams params;
  params.ks = options.ks;
  params.trials = options.trials;
  params.seed = options.seed;
  params.alpha = options.config.alpha;

  std::vector<KlRow> rows;
  std::vector<std::size_t> skipped;
  for (KlMetric metric : {KlMetric::bc, KlMetric::hegemony}) {
    if (options.metric != "both" && options.metric != to_string(metric))
      continue;
    auto result = kl_experiment(stats, params, metric);
    rows.insert(rows.end(), result.rows.begin(), result.rows.end());
    skipped = result.skipped_ks;
  }
  for (auto k : skipped)
    err << "warning: k=" << k << " exceeds the " << stats.viewpoints.size()
        << " available viewpoints; skipped\n";

  try {
    OutputFile out(options.output);
    if (options.format == "json")
      write_kl_json(out.stream(), rows);
    else
      write_kl_csv(out.stream(), rows);
  } catch (const std::exception& e) {
    return input_failure(err, e);
  }
  return rows.empty() ? kEmptyResult : kOk;
}

} // namespace hegemony::cli
