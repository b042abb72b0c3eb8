#include <CLI11.hpp>

#include <iostream>

#include "hegemony/cli.hpp"
#include "hegemony/manifest.hpp"

namespace {

using hegemony::AddressFamily;
using hegemony::AsSetPolicy;
using hegemony::WeightedMode;

struct ConfigFlags {
  double alpha = 0.1;
  int family = 4;
  std::string weighted = "auto";
  double full_feed_fraction = 0.75;
  std::size_t min_viewpoints = 10;
  bool include_partial_feeds = false;
  std::string as_set_policy = "reject";
  bool keep_reserved_asns = false;

  void apply(hegemony::HegemonyConfig& config) const {
    config.alpha = alpha;
    config.family = family == 6 ? AddressFamily::ipv6 : AddressFamily::ipv4;
    config.weighted = weighted == "on"    ? WeightedMode::on
                      : weighted == "off" ? WeightedMode::off
                                          : WeightedMode::automatic;
    config.full_feed_fraction = full_feed_fraction;
    config.min_viewpoints = min_viewpoints;
    config.full_feed_only = !include_partial_feeds;
    config.normalize.as_set = as_set_policy == "truncate" ? AsSetPolicy::truncate
                                                          : AsSetPolicy::reject;
    config.normalize.filter_reserved_asns = !keep_reserved_asns;
    config.validate();
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--alpha", flags.alpha,
                  "Trim ratio per side, in [0, 0.5)")
      ->check(CLI::Range(0.0, 0.5))
      ->envname("HEGEMONY_ALPHA")
      ->capture_default_str();
  cmd->add_option("--family", flags.family, "Address family")
      ->check(CLI::IsMember({4, 6}))
      ->envname("HEGEMONY_FAMILY")
      ->capture_default_str();
  cmd->add_option("--weighted", flags.weighted,
                  "Address-space path weighting (auto = on for IPv4, off for IPv6)")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->envname("HEGEMONY_WEIGHTED")
      ->capture_default_str();
  cmd->add_option("--full-feed-fraction", flags.full_feed_fraction,
                  "Full-feed threshold as a fraction of the largest feed")
      ->check(CLI::Range(0.0, 1.0))
      ->envname("HEGEMONY_FULL_FEED_FRACTION")
      ->capture_default_str();
  cmd->add_option("--min-viewpoints", flags.min_viewpoints,
                  "Below this many viewpoints, results carry a low-confidence flag")
      ->envname("HEGEMONY_MIN_VIEWPOINTS")
      ->capture_default_str();
  cmd->add_flag("--include-partial-feeds", flags.include_partial_feeds,
                "Use partial-feed viewpoints too")
      ->envname("HEGEMONY_INCLUDE_PARTIAL_FEEDS");
  cmd->add_option("--as-set-policy", flags.as_set_policy,
                  "Paths containing AS-sets: reject them or truncate before the set")
      ->check(CLI::IsMember({"reject", "truncate"}))
      ->envname("HEGEMONY_AS_SET_POLICY")
      ->capture_default_str();
  cmd->add_flag("--keep-reserved-asns", flags.keep_reserved_asns,
                "Keep paths containing reserved/private ASNs")
      ->envname("HEGEMONY_KEEP_RESERVED_ASNS");
}

void add_common_flags(CLI::App* cmd, hegemony::cli::CommonOptions& options) {
  cmd->add_option("--output,-o", options.output,
                  "Output file ('-' = stdout; files get a .manifest.json sidecar)")
      ->capture_default_str();
  cmd->add_option("--format", options.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname("HEGEMONY_FORMAT")
      ->capture_default_str();
  cmd->add_option("--input-format", options.input_format,
                  "Force input interpretation instead of sniffing")
      ->check(CLI::IsMember({"auto", "text", "mrt"}))
      ->capture_default_str();
  cmd->add_option("--collector", options.collector,
                  "Collector label for MRT inputs (default: file stem)");
  cmd->add_option("--date", options.date,
                  "Snapshot date label (default: derived from entry timestamps)");
  cmd->add_option("--seed", options.seed, "Seed for randomized operations")
      ->envname("HEGEMONY_SEED")
      ->capture_default_str();
  cmd->add_option("--jobs", options.jobs, "Worker threads (0 = all cores)")
      ->envname("HEGEMONY_JOBS")
      ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"AS hegemony: robust AS centrality from BGP RIB snapshots"};
  app.set_version_flag("--version", std::string(hegemony::kToolVersion));
  app.require_subcommand(1);

  hegemony::cli::GlobalOptions global_options;
  ConfigFlags global_flags;
  auto* global = app.add_subcommand("global", "Hegemony over the global AS graph");
  global->add_option("inputs", global_options.inputs, "RIB snapshots (text or MRT)")
      ->required();
  add_common_flags(global, global_options);
  add_config_flags(global, global_flags);

  hegemony::cli::LocalOptions local_options;
  ConfigFlags local_flags;
  auto* local = app.add_subcommand("local", "Hegemony over per-origin local graphs");
  local->add_option("inputs", local_options.inputs, "RIB snapshots (text or MRT)")
      ->required();
  auto* origin_opt =
      local->add_option("--origin", local_options.origins, "Origin ASNs")
          ->delimiter(',');
  auto* all_flag = local->add_flag("--all", local_options.all,
                                   "Sweep every origin announcing address space");
  origin_opt->excludes(all_flag);
  local->add_option("--summary", local_options.summary_output,
                    "Also write per-origin dependency counts to this CSV");
  local->add_option("--summary-threshold", local_options.summary_threshold,
                    "Hegemony threshold for the summary's dependency count")
      ->capture_default_str();
  add_common_flags(local, local_options);
  add_config_flags(local, local_flags);

  hegemony::cli::TimeseriesOptions ts_options;
  auto* ts = app.add_subcommand(
      "timeseries", "Concatenate per-snapshot outputs into a dated long table");
  ts->add_option("inputs", ts_options.inputs, "Score CSVs from previous runs")
      ->required();
  ts->add_option("--output,-o", ts_options.output, "Output file ('-' = stdout)")
      ->capture_default_str();
  ts->add_flag("--force", ts_options.force,
               "Concatenate even when manifests are missing or settings differ");

  hegemony::cli::RobustnessOptions rob_options;
  ConfigFlags rob_flags;
  auto* rob = app.add_subcommand(
      "robustness", "Viewpoint-subsampling KL-divergence experiment");
  rob->add_option("inputs", rob_options.inputs, "RIB snapshots (text or MRT)");
  rob->add_option("--topology", rob_options.topology,
                  "Synthetic topology file (edge list + viewpoint lines)");
  rob->add_option("--viewpoints", rob_options.viewpoints,
                  "Viewpoint ASNs, overriding the topology file")
      ->delimiter(',');
  rob->add_option("--ks", rob_options.ks, "Viewpoint counts to sample")
      ->delimiter(',')
      ->capture_default_str();
  rob->add_option("--trials", rob_options.trials, "Random subsets per k")
      ->capture_default_str();
  rob->add_option("--metric", rob_options.metric, "Which metric(s) to run")
      ->check(CLI::IsMember({"bc", "hegemony", "both"}))
      ->capture_default_str();
  add_common_flags(rob, rob_options);
  add_config_flags(rob, rob_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : hegemony::cli::kInputError;
  }

  try {
    if (global->parsed()) {
      global_flags.apply(global_options.config);
      return hegemony::cli::cmd_global(global_options, std::cerr);
    }
    if (local->parsed()) {
      local_flags.apply(local_options.config);
      if (local_options.origins.empty() && !local_options.all) {
        std::cerr << "error: local requires --origin or --all\n";
        return hegemony::cli::kInputError;
      }
      return hegemony::cli::cmd_local(local_options, std::cerr);
    }
    if (ts->parsed())
      return hegemony::cli::cmd_timeseries(ts_options, std::cerr);
    if (rob->parsed()) {
      rob_flags.apply(rob_options.config);
      if (rob_options.topology.empty() && rob_options.inputs.empty()) {
        std::cerr << "error: robustness requires --topology or RIB inputs\n";
        return hegemony::cli::kInputError;
      }
      return hegemony::cli::cmd_robustness(rob_options, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hegemony::cli::kInputError;
  }
  return hegemony::cli::kInputError;
}
