#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hegemony/text_format.hpp"
#include "hegemony/types.hpp"

namespace hegemony {

struct MrtStats {
  std::uint64_t records = 0;           // MRT records read
  std::uint64_t entries = 0;           // RibEntry rows emitted
  std::uint64_t skipped_records = 0;   // unknown type/subtype
  std::uint64_t corrupt_records = 0;   // body failed to parse, record dropped
  std::uint64_t truncated_records = 0; // file ended mid-record
  std::uint64_t unknown_peer = 0;      // RIB row referencing absent peer index
  std::uint64_t missing_as_path = 0;   // RIB row without an AS_PATH attribute
  std::uint64_t peer_mismatch = 0;     // first path element != peer ASN
  std::uint64_t ipv6_long_prefix = 0;  // IPv6 prefix longer than /64, kept
};

/// Parses an MRT file (RFC 6396), yielding one RibEntry per (prefix, peer)
/// RIB row. Supports TABLE_DUMP_V2 PEER_INDEX_TABLE / RIB_IPV4_UNICAST /
/// RIB_IPV6_UNICAST plus a best-effort TABLE_DUMP (v1) adapter. Input may be
/// gzip-compressed (bzip2 when built against libbz2); compression is sniffed
/// from magic bytes, never from the file name.
///
/// A truncated common header raises ParseError with the byte offset (within
/// the decompressed stream). A file that ends mid-record keeps all prior
/// entries and counts one truncated record. Unknown record types are skipped
/// and counted.
///
/// `collector` names the collector in emitted ViewpointIds; MRT files do not
/// carry one.
void parse_mrt(std::istream& in, const std::string& collector,
               const EntrySink& sink, MrtStats& stats);

} // namespace hegemony
