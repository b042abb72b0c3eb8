#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hegemony/types.hpp"

namespace hegemony {

struct TextStats {
  std::uint64_t lines = 0;          // non-comment, non-blank lines seen
  std::uint64_t entries = 0;        // entries emitted
  std::uint64_t bad_lines = 0;      // malformed, skipped
  std::uint64_t peer_mismatch = 0;  // first path element != peer ASN, skipped
  std::uint64_t ipv6_long_prefix = 0;
  std::vector<std::uint64_t> bad_line_numbers; // 1-based, capped
};

using EntrySink = std::function<void(RibEntry&&)>;

/// Parses the line format `collector|peer_ip|peer_asn|prefix|as_path|timestamp`.
/// AS paths are space-separated; AS-sets render as `{1,2}`. Lines starting
/// with `#` and blank lines are ignored. Malformed lines are skipped and
/// recorded in `stats`, preserving input order of valid lines.
void parse_text(std::istream& in, const EntrySink& sink, TextStats& stats);

std::vector<RibEntry> parse_text_all(std::istream& in, TextStats& stats);

/// Renders one entry as a text-format line (no trailing newline).
/// parse_text of rendered output reproduces the entry exactly.
std::string render_text(const RibEntry& entry);

void render_text(const std::vector<RibEntry>& entries, std::ostream& out);

} // namespace hegemony
