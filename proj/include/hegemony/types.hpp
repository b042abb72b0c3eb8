#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hegemony {

using Asn = std::uint32_t;

/// Address counts must hold up to 2^128 - 1 so IPv6 weighting can be enabled
/// experimentally; IPv4 counts fit in the low 64 bits.
using AddrCount = unsigned __int128;

/// Converts an address count to double for score arithmetic. Exact for
/// counts below 2^53, which covers all IPv4 totals.
inline double to_double(AddrCount c) {
  return static_cast<double>(static_cast<std::uint64_t>(c >> 64)) * 1.8446744073709552e19
         + static_cast<double>(static_cast<std::uint64_t>(c));
}

enum class AddressFamily : std::uint8_t { ipv4 = 4, ipv6 = 6 };

inline int family_bits(AddressFamily f) {
  return f == AddressFamily::ipv4 ? 32 : 128;
}

/// Fatal input error: unrecoverable corruption at a known byte offset.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " at byte offset " + std::to_string(offset)),
      offset(offset) {}
  std::uint64_t offset;
};

/// An IP prefix in canonical form: host bits beyond `len` are zero.
/// The address is stored network-order in the first 4 (IPv4) or 16 (IPv6)
/// bytes of `addr`.
struct IpPrefix {
  std::array<std::uint8_t, 16> addr{};
  std::uint8_t len = 0;
  AddressFamily family = AddressFamily::ipv4;

  int bits() const { return family_bits(family); }
  bool is_default_route() const { return len == 0; }

  /// Value of address bit `i` counting from the most significant bit.
  int bit(int i) const { return (addr[i / 8] >> (7 - i % 8)) & 1; }

  /// True if `other` lies inside this prefix (this is equal or less specific).
  bool contains(const IpPrefix& other) const;

  /// Zeroes host bits past `len`.
  void canonicalize();

  /// Number of addresses spanned: 2^(bits - len).
  AddrCount size() const { return AddrCount(1) << (bits() - len); }

  /// First address as an integer, left-aligned in `bits()` bits.
  AddrCount base() const;

  auto operator<=>(const IpPrefix&) const = default;

  std::string to_string() const;
  static std::optional<IpPrefix> parse(const std::string& text);
};

/// Identity of a BGP viewpoint: the peer of a route collector.
struct ViewpointId {
  std::string collector;
  std::string peer_ip;
  Asn peer_asn = 0;

  auto operator<=>(const ViewpointId&) const = default;
  std::string to_string() const {
    return collector + "|" + peer_ip + "|" + std::to_string(peer_asn);
  }
};

/// One element of a raw AS path: a plain ASN or an AS-set.
struct PathSegment {
  bool is_set = false;
  Asn asn = 0;                  // valid when !is_set
  std::vector<Asn> members;     // valid when is_set

  static PathSegment plain(Asn a) { return {false, a, {}}; }
  static PathSegment as_set(std::vector<Asn> m) { return {true, 0, std::move(m)}; }
  bool operator==(const PathSegment&) const = default;
};

using RawPath = std::vector<PathSegment>;

/// One (viewpoint, prefix, AS path) row of a RIB snapshot.
struct RibEntry {
  ViewpointId viewpoint;
  IpPrefix prefix;
  RawPath path;
  std::uint64_t timestamp = 0;

  bool operator==(const RibEntry&) const = default;
};

/// A loop-free AS path with prepending removed: distinct ASNs in traversal
/// order, viewpoint side first, origin last.
struct CleanPath {
  std::vector<Asn> asns;

  Asn origin() const { return asns.back(); }
  bool operator==(const CleanPath&) const = default;
};

/// A viewpoint with its snapshot-wide route count and full-feed status.
struct Viewpoint {
  ViewpointId id;
  AddressFamily family = AddressFamily::ipv4;
  std::uint64_t route_count = 0;
  bool full_feed = false;
};

} // namespace hegemony
