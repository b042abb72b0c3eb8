#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hegemony/types.hpp"

namespace hegemony {

/// Per-viewpoint binary trie of advertised prefixes. After `finalize`, each
/// advertised prefix carries its exclusive address count: the number of
/// addresses it covers that no more-specific advertised prefix covers.
/// Equivalently, each address is attributed to its longest advertised match,
/// so the exclusive counts of all advertised prefixes sum to the size of
/// their union.
///
/// The address width is configurable (32 for IPv4, 128 for IPv6; tests use
/// toy widths) and counts are 128-bit capable.
class PrefixTrie {
public:
  explicit PrefixTrie(int bits) : bits_(bits) { nodes_.emplace_back(); }

  int bits() const { return bits_; }
  std::uint64_t duplicates() const { return duplicates_; }
  std::size_t advertised_count() const { return advertised_; }

  /// Inserts an advertised prefix carrying an opaque route index. Re-inserting
  /// a prefix replaces the previous route (last entry wins) and counts a
  /// duplicate.
  void insert(const std::uint8_t* addr, int len, std::uint32_t route_index);
  void insert(const IpPrefix& p, std::uint32_t route_index) {
    insert(p.addr.data(), p.len, route_index);
  }

  /// Computes exclusive counts. Must be called after the last insert and
  /// before any query.
  void finalize();

  /// Exclusive count of an advertised prefix; nullopt when the prefix was
  /// never advertised (distinct from an advertised prefix whose count is 0).
  std::optional<AddrCount> exclusive_count(const std::uint8_t* addr, int len) const;
  std::optional<AddrCount> exclusive_count(const IpPrefix& p) const {
    return exclusive_count(p.addr.data(), p.len);
  }

  /// Sum of all exclusive counts = address space covered by the advertised set.
  AddrCount total_exclusive() const { return total_; }

  /// Visits every advertised prefix as (route_index, exclusive_count).
  void for_each_advertised(
      const std::function<void(std::uint32_t, AddrCount)>& fn) const;

  /// Debug dump as `prefix,exclusive_count` CSV in trie (prefix) order.
  /// Widths 32 and 128 render as IP prefixes, other widths as bit strings.
  void dump_csv(std::ostream& out) const;

private:
  struct Node {
    std::int32_t child[2] = {-1, -1};
    std::uint32_t route = 0;
    bool advertised = false;
    AddrCount exclusive = 0;
  };

  AddrCount subtree_size(int depth) const {
    int span = bits_ - depth;
    return span >= 128 ? ~AddrCount(0) : AddrCount(1) << span;
  }

  // covered address space at or below `node`
  AddrCount finalize_node(std::size_t node, int depth);

  int bits_;
  std::vector<Node> nodes_;
  std::uint64_t duplicates_ = 0;
  std::size_t advertised_ = 0;
  AddrCount total_ = 0;
  bool finalized_ = false;
};

} // namespace hegemony
