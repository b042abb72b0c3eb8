#include "hegemony/mrt.hpp"

#include <arpa/inet.h>
#include <zlib.h>

#ifdef HEGEMONY_HAVE_BZLIB
#include <bzlib.h>
#endif

#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <vector>

namespace hegemony {

namespace {

// -- byte sources ------------------------------------------------------------

class ByteSource {
public:
  virtual ~ByteSource() = default;
  // Returns bytes read; 0 means end of stream.
  virtual std::size_t read(std::uint8_t* dst, std::size_t n) = 0;
};

class RawSource : public ByteSource {
public:
  RawSource(std::istream& in, std::vector<std::uint8_t> pending)
    : in_(in), pending_(std::move(pending)) {}

  std::size_t read(std::uint8_t* dst, std::size_t n) override {
    std::size_t got = 0;
    while (got < n && pos_ < pending_.size())
      dst[got++] = pending_[pos_++];
    if (got < n) {
      in_.read(reinterpret_cast<char*>(dst) + got, std::streamsize(n - got));
      got += std::size_t(in_.gcount());
    }
    return got;
  }

private:
  std::istream& in_;
  std::vector<std::uint8_t> pending_;
  std::size_t pos_ = 0;
};

class GzipSource : public ByteSource {
public:
  GzipSource(std::istream& in, std::vector<std::uint8_t> pending)
    : raw_(in, std::move(pending)) {
    std::memset(&strm_, 0, sizeof(strm_));
    if (inflateInit2(&strm_, 15 + 32) != Z_OK) // zlib or gzip header
      throw ParseError("cannot initialize zlib", 0);
  }

  ~GzipSource() override { inflateEnd(&strm_); }

  std::size_t read(std::uint8_t* dst, std::size_t n) override {
    std::size_t got = 0;
    while (got < n && !done_) {
      if (strm_.avail_in == 0 && !input_eof_) {
        std::size_t r = raw_.read(inbuf_, sizeof(inbuf_));
        strm_.next_in = inbuf_;
        strm_.avail_in = uInt(r);
        input_eof_ = r == 0;
      }
      strm_.next_out = dst + got;
      strm_.avail_out = uInt(n - got);
      int rc = inflate(&strm_, Z_NO_FLUSH);
      got = n - strm_.avail_out;
      if (rc == Z_STREAM_END) {
        // gzip members may be concatenated
        if (strm_.avail_in == 0 && input_eof_)
          done_ = true;
        else if (inflateReset(&strm_) != Z_OK)
          done_ = true;
      } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
        throw ParseError(std::string("gzip decompression failed: ")
                           + (strm_.msg ? strm_.msg : zError(rc)),
                         total_out());
      } else if (rc == Z_BUF_ERROR && input_eof_ && strm_.avail_in == 0) {
        done_ = true; // ends mid-stream; surface as truncation downstream
      }
    }
    return got;
  }

private:
  std::uint64_t total_out() const { return strm_.total_out; }

  RawSource raw_;
  z_stream strm_;
  std::uint8_t inbuf_[1 << 16];
  bool input_eof_ = false;
  bool done_ = false;
};

#ifdef HEGEMONY_HAVE_BZLIB
class Bzip2Source : public ByteSource {
public:
  Bzip2Source(std::istream& in, std::vector<std::uint8_t> pending)
    : raw_(in, std::move(pending)) {
    std::memset(&strm_, 0, sizeof(strm_));
    if (BZ2_bzDecompressInit(&strm_, 0, 0) != BZ_OK)
      throw ParseError("cannot initialize bzip2", 0);
  }

  ~Bzip2Source() override { BZ2_bzDecompressEnd(&strm_); }

  std::size_t read(std::uint8_t* dst, std::size_t n) override {
    std::size_t got = 0;
    while (got < n && !done_) {
      if (strm_.avail_in == 0 && !input_eof_) {
        std::size_t r = raw_.read(reinterpret_cast<std::uint8_t*>(inbuf_),
                                  sizeof(inbuf_));
        strm_.next_in = inbuf_;
        strm_.avail_in = unsigned(r);
        input_eof_ = r == 0;
      }
      strm_.next_out = reinterpret_cast<char*>(dst) + got;
      strm_.avail_out = unsigned(n - got);
      int rc = BZ2_bzDecompress(&strm_);
      got = n - strm_.avail_out;
      if (rc == BZ_STREAM_END) {
        if (strm_.avail_in == 0 && input_eof_) {
          done_ = true;
        } else {
          BZ2_bzDecompressEnd(&strm_);
          std::memset(&strm_, 0, sizeof(strm_));
          // leftover bytes belong to a concatenated stream; not re-fed here
          done_ = true;
        }
      } else if (rc != BZ_OK) {
        throw ParseError("bzip2 decompression failed", 0);
      } else if (input_eof_ && strm_.avail_in == 0) {
        done_ = true;
      }
    }
    return got;
  }

private:
  RawSource raw_;
  bz_stream strm_;
  char inbuf_[1 << 16];
  bool input_eof_ = false;
  bool done_ = false;
};
#endif

std::unique_ptr<ByteSource> open_source(std::istream& in) {
  std::uint8_t magic[3] = {0, 0, 0};
  in.read(reinterpret_cast<char*>(magic), 3);
  std::vector<std::uint8_t> pending(magic, magic + in.gcount());
  if (pending.size() >= 2 && magic[0] == 0x1f && magic[1] == 0x8b)
    return std::make_unique<GzipSource>(in, std::move(pending));
  if (pending.size() >= 3 && magic[0] == 'B' && magic[1] == 'Z' && magic[2] == 'h') {
#ifdef HEGEMONY_HAVE_BZLIB
    return std::make_unique<Bzip2Source>(in, std::move(pending));
#else
    throw ParseError("bzip2-compressed input, but built without libbz2", 0);
#endif
  }
  return std::make_unique<RawSource>(in, std::move(pending));
}

// -- wire cursor ---------------------------------------------------------------

struct Cursor {
  const std::uint8_t* p;
  std::size_t n;
  std::size_t pos = 0;

  bool need(std::size_t k) const { return pos + k <= n; }
  bool u8(std::uint8_t& v) {
    if (!need(1))
      return false;
    v = p[pos++];
    return true;
  }
  bool u16(std::uint16_t& v) {
    if (!need(2))
      return false;
    v = std::uint16_t(p[pos] << 8 | p[pos + 1]);
    pos += 2;
    return true;
  }
  bool u32(std::uint32_t& v) {
    if (!need(4))
      return false;
    v = std::uint32_t(p[pos]) << 24 | std::uint32_t(p[pos + 1]) << 16
        | std::uint32_t(p[pos + 2]) << 8 | std::uint32_t(p[pos + 3]);
    pos += 4;
    return true;
  }
  bool skip(std::size_t k) {
    if (!need(k))
      return false;
    pos += k;
    return true;
  }
  bool bytes(std::uint8_t* dst, std::size_t k) {
    if (!need(k))
      return false;
    std::memcpy(dst, p + pos, k);
    pos += k;
    return true;
  }
};

// MRT types and TABLE_DUMP_V2 subtypes used here (RFC 6396).
enum : std::uint16_t {
  kTableDump = 12,
  kTableDumpV2 = 13,
  kPeerIndexTable = 1,
  kRibIpv4Unicast = 2,
  kRibIpv6Unicast = 4,
};

enum : std::uint8_t {
  kAttrAsPath = 2,
  kAttrAs4Path = 17,
  kSegAsSet = 1,
  kSegAsSequence = 2,
};

struct PeerRecord {
  std::string ip;
  Asn asn = 0;
};

std::string format_ip(const std::uint8_t* bytes, bool v6) {
  char buf[INET6_ADDRSTRLEN];
  if (!inet_ntop(v6 ? AF_INET6 : AF_INET, bytes, buf, sizeof(buf)))
    return "?";
  return buf;
}

// AS_PATH segment list -> RawPath with AS_SEQUENCE flattened to plain hops.
bool parse_as_path(Cursor& c, std::size_t end, bool four_byte, RawPath& out) {
  while (c.pos < end) {
    std::uint8_t seg_type, count;
    if (!c.u8(seg_type) || !c.u8(count))
      return false;
    std::vector<Asn> asns(count);
    for (auto& a : asns) {
      if (four_byte) {
        std::uint32_t v;
        if (!c.u32(v) || c.pos > end)
          return false;
        a = v;
      } else {
        std::uint16_t v;
        if (!c.u16(v) || c.pos > end)
          return false;
        a = v;
      }
    }
    if (seg_type == kSegAsSet) {
      if (asns.empty())
        return false;
      out.push_back(PathSegment::as_set(std::move(asns)));
    } else if (seg_type == kSegAsSequence) {
      for (Asn a : asns)
        out.push_back(PathSegment::plain(a));
    } else {
      return false;
    }
  }
  return c.pos == end;
}

// RFC 6793 reconciliation: an AS_SET counts as one element. When the
// AS4_PATH is no longer than the AS_PATH, it replaces that many trailing
// elements; otherwise it is ignored.
RawPath merge_as4_path(RawPath as_path, const RawPath& as4_path) {
  if (as4_path.empty() || as4_path.size() > as_path.size())
    return as_path;
  as_path.resize(as_path.size() - as4_path.size());
  as_path.insert(as_path.end(), as4_path.begin(), as4_path.end());
  return as_path;
}

// Walks a BGP path attribute block and extracts the AS path.
bool extract_path(Cursor& c, std::size_t end, bool four_byte, bool& have_path,
                  RawPath& path) {
  RawPath as_path, as4_path;
  bool have_as = false, have_as4 = false;
  while (c.pos < end) {
    std::uint8_t flags, type;
    if (!c.u8(flags) || !c.u8(type))
      return false;
    std::uint32_t alen;
    if (flags & 0x10) {
      std::uint16_t v;
      if (!c.u16(v))
        return false;
      alen = v;
    } else {
      std::uint8_t v;
      if (!c.u8(v))
        return false;
      alen = v;
    }
    std::size_t attr_end = c.pos + alen;
    if (attr_end > end)
      return false;
    if (type == kAttrAsPath) {
      if (!parse_as_path(c, attr_end, four_byte, as_path))
        return false;
      have_as = true;
    } else if (type == kAttrAs4Path) {
      if (!parse_as_path(c, attr_end, true, as4_path))
        return false;
      have_as4 = true;
    } else {
      c.pos = attr_end;
    }
  }
  if (c.pos != end)
    return false;
  have_path = have_as;
  path = have_as4 ? merge_as4_path(std::move(as_path), as4_path) : as_path;
  return true;
}

struct RecordContext {
  const std::string& collector;
  const EntrySink& sink;
  MrtStats& stats;
  std::map<std::uint16_t, PeerRecord> peers;
};

void emit_entry(RecordContext& ctx, const PeerRecord& peer, IpPrefix prefix,
                RawPath path, std::uint64_t timestamp) {
  if (path.empty()) {
    ++ctx.stats.missing_as_path;
    return;
  }
  if (path.front().is_set || path.front().asn != peer.asn) {
    ++ctx.stats.peer_mismatch;
    return;
  }
  if (prefix.family == AddressFamily::ipv6 && prefix.len > 64)
    ++ctx.stats.ipv6_long_prefix;
  RibEntry e;
  e.viewpoint = {ctx.collector, peer.ip, peer.asn};
  e.prefix = prefix;
  e.path = std::move(path);
  e.timestamp = timestamp;
  ++ctx.stats.entries;
  ctx.sink(std::move(e));
}

bool parse_peer_index_table(RecordContext& ctx, Cursor c) {
  std::uint32_t collector_id;
  std::uint16_t name_len;
  if (!c.u32(collector_id) || !c.u16(name_len) || !c.skip(name_len))
    return false;
  std::uint16_t peer_count;
  if (!c.u16(peer_count))
    return false;
  std::map<std::uint16_t, PeerRecord> peers;
  for (std::uint16_t i = 0; i < peer_count; ++i) {
    std::uint8_t peer_type;
    std::uint32_t bgp_id;
    if (!c.u8(peer_type) || !c.u32(bgp_id))
      return false;
    bool v6 = peer_type & 0x01;
    bool as4 = peer_type & 0x02;
    std::uint8_t ip[16] = {};
    if (!c.bytes(ip, v6 ? 16 : 4))
      return false;
    PeerRecord p;
    p.ip = format_ip(ip, v6);
    if (as4) {
      std::uint32_t a;
      if (!c.u32(a))
        return false;
      p.asn = a;
    } else {
      std::uint16_t a;
      if (!c.u16(a))
        return false;
      p.asn = a;
    }
    peers[i] = std::move(p);
  }
  ctx.peers = std::move(peers);
  return true;
}

bool parse_rib(RecordContext& ctx, Cursor c, bool v6, std::uint64_t timestamp) {
  std::uint32_t seq;
  std::uint8_t plen;
  if (!c.u32(seq) || !c.u8(plen))
    return false;
  if (plen > (v6 ? 128 : 32))
    return false;
  IpPrefix prefix;
  prefix.family = v6 ? AddressFamily::ipv6 : AddressFamily::ipv4;
  prefix.len = plen;
  if (!c.bytes(prefix.addr.data(), (plen + 7) / 8))
    return false;
  prefix.canonicalize();
  std::uint16_t entry_count;
  if (!c.u16(entry_count))
    return false;
  for (std::uint16_t i = 0; i < entry_count; ++i) {
    std::uint16_t peer_index, attr_len;
    std::uint32_t originated;
    if (!c.u16(peer_index) || !c.u32(originated) || !c.u16(attr_len))
      return false;
    std::size_t attr_end = c.pos + attr_len;
    if (attr_end > c.n)
      return false;
    bool have_path = false;
    RawPath path;
    if (!extract_path(c, attr_end, /*four_byte=*/true, have_path, path))
      return false;
    auto it = ctx.peers.find(peer_index);
    if (it == ctx.peers.end()) {
      ++ctx.stats.unknown_peer;
      continue;
    }
    if (!have_path) {
      ++ctx.stats.missing_as_path;
      continue;
    }
    emit_entry(ctx, it->second, prefix, std::move(path), timestamp);
  }
  return c.pos == c.n;
}

// TABLE_DUMP (v1) carries one route per record with 2-byte path ASNs.
bool parse_table_dump_v1(RecordContext& ctx, Cursor c, bool v6,
                         std::uint64_t timestamp) {
  std::uint16_t view, seq;
  if (!c.u16(view) || !c.u16(seq))
    return false;
  IpPrefix prefix;
  prefix.family = v6 ? AddressFamily::ipv6 : AddressFamily::ipv4;
  if (!c.bytes(prefix.addr.data(), v6 ? 16 : 4))
    return false;
  std::uint8_t status;
  std::uint32_t originated;
  if (!c.u8(prefix.len) || !c.u8(status) || !c.u32(originated))
    return false;
  if (prefix.len > (v6 ? 128 : 32))
    return false;
  prefix.canonicalize();
  std::uint8_t ip[16] = {};
  if (!c.bytes(ip, v6 ? 16 : 4))
    return false;
  PeerRecord peer;
  peer.ip = format_ip(ip, v6);
  std::uint16_t peer_as, attr_len;
  if (!c.u16(peer_as) || !c.u16(attr_len))
    return false;
  peer.asn = peer_as;
  if (c.pos + attr_len != c.n)
    return false;
  bool have_path = false;
  RawPath path;
  if (!extract_path(c, c.n, /*four_byte=*/false, have_path, path))
    return false;
  if (!have_path) {
    ++ctx.stats.missing_as_path;
    return true;
  }
  emit_entry(ctx, peer, prefix, std::move(path), timestamp);
  return true;
}

} // namespace

void parse_mrt(std::istream& in, const std::string& collector,
               const EntrySink& sink, MrtStats& stats) {
  auto source = open_source(in);
  RecordContext ctx{collector, sink, stats, {}};
  std::uint64_t offset = 0;
  std::vector<std::uint8_t> body;
  for (;;) {
    std::uint8_t header[12];
    std::size_t got = source->read(header, 12);
    if (got == 0)
      break; // clean end of stream
    if (got < 12)
      throw ParseError("truncated MRT common header", offset);
    std::uint32_t timestamp = std::uint32_t(header[0]) << 24
                              | std::uint32_t(header[1]) << 16
                              | std::uint32_t(header[2]) << 8 | header[3];
    std::uint16_t type = std::uint16_t(header[4] << 8 | header[5]);
    std::uint16_t subtype = std::uint16_t(header[6] << 8 | header[7]);
    std::uint32_t length = std::uint32_t(header[8]) << 24
                           | std::uint32_t(header[9]) << 16
                           | std::uint32_t(header[10]) << 8 | header[11];
    body.resize(length);
    got = length ? source->read(body.data(), length) : 0;
    if (got < length) {
      ++stats.truncated_records;
      break;
    }
    ++stats.records;
    Cursor c{body.data(), body.size()};
    bool ok = true;
    if (type == kTableDumpV2 && subtype == kPeerIndexTable) {
      ok = parse_peer_index_table(ctx, c);
    } else if (type == kTableDumpV2
               && (subtype == kRibIpv4Unicast || subtype == kRibIpv6Unicast)) {
      ok = parse_rib(ctx, c, subtype == kRibIpv6Unicast, timestamp);
    } else if (type == kTableDump && (subtype == 1 || subtype == 2)) {
      ok = parse_table_dump_v1(ctx, c, subtype == 2, timestamp);
    } else {
      ++stats.skipped_records;
    }
    if (!ok)
      ++stats.corrupt_records;
    offset += 12 + length;
  }
}

} // namespace hegemony
