#include "hegemony/prefix_trie.hpp"

#include <arpa/inet.h>

#include <cassert>
#include <ostream>
#include <string>

namespace hegemony {

namespace {

int bit_at(const std::uint8_t* addr, int i) {
  return (addr[i / 8] >> (7 - i % 8)) & 1;
}

} // namespace

void PrefixTrie::insert(const std::uint8_t* addr, int len, std::uint32_t route_index) {
  assert(!finalized_ && len <= bits_);
  std::size_t cur = 0;
  for (int i = 0; i < len; ++i) {
    int b = bit_at(addr, i);
    if (nodes_[cur].child[b] < 0) {
      nodes_[cur].child[b] = std::int32_t(nodes_.size());
      nodes_.emplace_back();
    }
    cur = std::size_t(nodes_[cur].child[b]);
  }
  if (nodes_[cur].advertised)
    ++duplicates_;
  else
    ++advertised_;
  nodes_[cur].advertised = true;
  nodes_[cur].route = route_index;
}

AddrCount PrefixTrie::finalize_node(std::size_t node, int depth) {
  AddrCount below = 0;
  for (int b = 0; b < 2; ++b)
    if (nodes_[node].child[b] >= 0)
      below += finalize_node(std::size_t(nodes_[node].child[b]), depth + 1);
  if (!nodes_[node].advertised)
    return below;
  nodes_[node].exclusive = subtree_size(depth) - below;
  total_ += nodes_[node].exclusive;
  return subtree_size(depth);
}

void PrefixTrie::finalize() {
  assert(!finalized_);
  finalize_node(0, 0);
  finalized_ = true;
}

std::optional<AddrCount> PrefixTrie::exclusive_count(const std::uint8_t* addr,
                                                     int len) const {
  assert(finalized_);
  std::size_t cur = 0;
  for (int i = 0; i < len; ++i) {
    int next = nodes_[cur].child[bit_at(addr, i)];
    if (next < 0)
      return std::nullopt;
    cur = std::size_t(next);
  }
  if (!nodes_[cur].advertised)
    return std::nullopt;
  return nodes_[cur].exclusive;
}

void PrefixTrie::for_each_advertised(
    const std::function<void(std::uint32_t, AddrCount)>& fn) const {
  assert(finalized_);
  // iterative DFS, left child first: trie order
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t cur = stack.back();
    stack.pop_back();
    if (nodes_[cur].advertised)
      fn(nodes_[cur].route, nodes_[cur].exclusive);
    for (int b = 1; b >= 0; --b)
      if (nodes_[cur].child[b] >= 0)
        stack.push_back(std::size_t(nodes_[cur].child[b]));
  }
}

void PrefixTrie::dump_csv(std::ostream& out) const {
  assert(finalized_);
  std::uint8_t addr[16] = {};
  auto render = [&](int len) {
    if (bits_ == 32 || bits_ == 128) {
      char buf[INET6_ADDRSTRLEN];
      inet_ntop(bits_ == 32 ? AF_INET : AF_INET6, addr, buf, sizeof(buf));
      return std::string(buf) + "/" + std::to_string(len);
    }
    std::string s;
    for (int i = 0; i < len; ++i)
      s += char('0' + bit_at(addr, i));
    return s + "/" + std::to_string(len);
  };
  auto dec = [](AddrCount v) {
    if (v == 0)
      return std::string("0");
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), char('0' + int(v % 10)));
      v /= 10;
    }
    return s;
  };
  out << "prefix,exclusive_count\n";
  std::function<void(std::size_t, int)> walk = [&](std::size_t cur, int depth) {
    if (nodes_[cur].advertised)
      out << render(depth) << ',' << dec(nodes_[cur].exclusive) << '\n';
    for (int b = 0; b < 2; ++b) {
      if (nodes_[cur].child[b] < 0)
        continue;
      if (b)
        addr[depth / 8] |= std::uint8_t(0x80 >> (depth % 8));
      walk(std::size_t(nodes_[cur].child[b]), depth + 1);
      if (b)
        addr[depth / 8] &= std::uint8_t(~(0x80 >> (depth % 8)));
    }
  };
  walk(0, 0);
}

} // namespace hegemony
