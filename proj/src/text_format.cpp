#include "hegemony/text_format.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

namespace hegemony {

namespace {

constexpr std::size_t kMaxBadLineNumbers = 64;

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty())
    return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_asn(std::string_view s, Asn& out) {
  std::uint64_t v;
  if (!parse_u64(s, v) || v > 0xffffffffull)
    return false;
  out = Asn(v);
  return true;
}

// `64500 {64501,64502} 64503` -> segments; empty/garbage -> false.
bool parse_path(std::string_view s, RawPath& path) {
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ')
      ++i;
    if (i >= s.size())
      break;
    if (s[i] == '{') {
      auto close = s.find('}', i);
      if (close == std::string_view::npos)
        return false;
      std::vector<Asn> members;
      std::string_view inner = s.substr(i + 1, close - i - 1);
      std::size_t j = 0;
      while (j < inner.size()) {
        auto comma = inner.find(',', j);
        auto tok = inner.substr(j, comma == std::string_view::npos
                                       ? std::string_view::npos
                                       : comma - j);
        Asn a;
        if (!parse_asn(tok, a))
          return false;
        members.push_back(a);
        if (comma == std::string_view::npos)
          break;
        j = comma + 1;
      }
      if (members.empty())
        return false;
      path.push_back(PathSegment::as_set(std::move(members)));
      i = close + 1;
    } else {
      auto end = s.find(' ', i);
      auto tok = s.substr(i, end == std::string_view::npos ? std::string_view::npos
                                                           : end - i);
      Asn a;
      if (!parse_asn(tok, a))
        return false;
      path.push_back(PathSegment::plain(a));
      i = end == std::string_view::npos ? s.size() : end;
    }
  }
  return !path.empty();
}

} // namespace

void parse_text(std::istream& in, const EntrySink& sink, TextStats& stats) {
  std::string line;
  std::uint64_t line_no = 0;
  auto reject = [&](std::uint64_t n) {
    ++stats.bad_lines;
    if (stats.bad_line_numbers.size() < kMaxBadLineNumbers)
      stats.bad_line_numbers.push_back(n);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    ++stats.lines;

    std::string_view rest = line;
    std::array<std::string_view, 6> fields;
    bool ok = true;
    for (int f = 0; f < 6; ++f) {
      auto bar = rest.find('|');
      if (f < 5) {
        if (bar == std::string_view::npos) {
          ok = false;
          break;
        }
        fields[f] = rest.substr(0, bar);
        rest = rest.substr(bar + 1);
      } else {
        if (bar != std::string_view::npos) {
          ok = false;
          break;
        }
        fields[f] = rest;
      }
    }
    if (!ok) {
      reject(line_no);
      continue;
    }

    RibEntry e;
    e.viewpoint.collector = std::string(fields[0]);
    e.viewpoint.peer_ip = std::string(fields[1]);
    auto prefix = IpPrefix::parse(std::string(fields[3]));
    if (e.viewpoint.collector.empty() || e.viewpoint.peer_ip.empty()
        || !parse_asn(fields[2], e.viewpoint.peer_asn) || !prefix
        || !parse_path(fields[4], e.path) || !parse_u64(fields[5], e.timestamp)) {
      reject(line_no);
      continue;
    }
    e.prefix = *prefix;
    if (e.path.front().is_set || e.path.front().asn != e.viewpoint.peer_asn) {
      ++stats.peer_mismatch;
      reject(line_no);
      continue;
    }
    if (e.prefix.family == AddressFamily::ipv6 && e.prefix.len > 64)
      ++stats.ipv6_long_prefix;
    ++stats.entries;
    sink(std::move(e));
  }
}

std::vector<RibEntry> parse_text_all(std::istream& in, TextStats& stats) {
  std::vector<RibEntry> out;
  parse_text(in, [&](RibEntry&& e) { out.push_back(std::move(e)); }, stats);
  return out;
}

std::string render_text(const RibEntry& e) {
  std::string s = e.viewpoint.collector;
  s += '|';
  s += e.viewpoint.peer_ip;
  s += '|';
  s += std::to_string(e.viewpoint.peer_asn);
  s += '|';
  s += e.prefix.to_string();
  s += '|';
  for (std::size_t i = 0; i < e.path.size(); ++i) {
    if (i)
      s += ' ';
    const auto& seg = e.path[i];
    if (seg.is_set) {
      s += '{';
      for (std::size_t j = 0; j < seg.members.size(); ++j) {
        if (j)
          s += ',';
        s += std::to_string(seg.members[j]);
      }
      s += '}';
    } else {
      s += std::to_string(seg.asn);
    }
  }
  s += '|';
  s += std::to_string(e.timestamp);
  return s;
}

void render_text(const std::vector<RibEntry>& entries, std::ostream& out) {
  for (const auto& e : entries)
    out << render_text(e) << '\n';
}

} // namespace hegemony
