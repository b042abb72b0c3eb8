#include "hegemony/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>

namespace hegemony {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx, buf, std::size_t(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof(b), "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

std::string utc_date(std::uint64_t timestamp) {
  std::time_t t = std::time_t(timestamp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof(buf), "%Y-%m-%d", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = command;
  j["scope"] = scope;
  j["seed"] = seed;
  j["config"] = {
      {"alpha", config.alpha},
      {"family", config.family == AddressFamily::ipv4 ? 4 : 6},
      {"weighted", config.weighting_enabled()},
      {"weighted_mode", config.weighted == WeightedMode::automatic
                            ? "auto"
                            : (config.weighted == WeightedMode::on ? "on" : "off")},
      {"full_feed_only", config.full_feed_only},
      {"full_feed_fraction", config.full_feed_fraction},
      {"min_viewpoints", config.min_viewpoints},
  };
  // every policy that can move a score is spelled out here
  j["policies"] = {
      {"as_set", config.normalize.as_set == AsSetPolicy::reject ? "reject" : "truncate"},
      {"reserved_asn_filter", config.normalize.filter_reserved_asns},
      {"prepending", "collapse"},
      {"default_route", "excluded"},
      {"missing_viewpoint_score", "zero"},
      {"viewpoint_first_hop", "counted"},
      {"per_prefix_multipath", "last_seen_wins"},
      {"local_total_weight", "joint_over_origin_prefixes"},
      {"moas", "per_origin_attribution"},
      {"path_endpoints", "counted"},
      {"kl_histogram", "50_bins_epsilon_1e-9"},
  };
  j["inputs"] = nlohmann::json::array();
  for (const auto& in : inputs)
    j["inputs"].push_back({{"path", in.path},
                           {"sha256", in.sha256},
                           {"format", in.format},
                           {"entries", in.entries}});
  j["parse_counters"] = {
      {"text_bad_lines", parse.text_bad_lines},
      {"mrt_records", parse.mrt_records},
      {"mrt_skipped_records", parse.mrt_skipped_records},
      {"mrt_corrupt_records", parse.mrt_corrupt_records},
      {"mrt_truncated_records", parse.mrt_truncated_records},
      {"unknown_peer", parse.unknown_peer},
      {"missing_as_path", parse.missing_as_path},
      {"peer_mismatch", parse.peer_mismatch},
      {"ipv6_long_prefix", parse.ipv6_long_prefix},
  };
  j["counters"] = {
      {"entries_added", counters.entries_added},
      {"clean_routes", counters.clean_routes},
      {"other_family", counters.other_family},
      {"duplicates_replaced", counters.duplicates_replaced},
      {"default_routes", counters.default_routes},
      {"rejected", {{"as_set", counters.rejected_as_set},
                    {"loop", counters.rejected_loop},
                    {"reserved_asn", counters.rejected_reserved_asn},
                    {"empty", counters.rejected_empty}}},
  };
  j["viewpoints"] = {
      {"total", viewpoints_total},
      {"full_feed", viewpoints_full_feed},
      {"used", viewpoints_used},
      {"empty", viewpoints_empty},
  };
  j["snapshot"] = {{"date", snapshot_date}, {"min_timestamp", min_timestamp}};
  j["graph"] = {{"nodes", graph.nodes}, {"edges", graph.edges}};
  j["result_rows"] = result_rows;
  return j.dump(2) + "\n";
}

} // namespace hegemony
