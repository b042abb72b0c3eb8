#include "hegemony/types.hpp"

#include <arpa/inet.h>

#include <cstring>

namespace hegemony {

bool IpPrefix::contains(const IpPrefix& other) const {
  if (family != other.family || len > other.len)
    return false;
  for (int i = 0; i < len; ++i)
    if (bit(i) != other.bit(i))
      return false;
  return true;
}

void IpPrefix::canonicalize() {
  int nbytes = bits() / 8;
  for (int i = 0; i < nbytes; ++i) {
    int keep = len - i * 8;
    if (keep >= 8)
      continue;
    addr[i] = keep <= 0 ? 0 : std::uint8_t(addr[i] & (0xff << (8 - keep)));
  }
}

AddrCount IpPrefix::base() const {
  AddrCount v = 0;
  for (int i = 0; i < bits() / 8; ++i)
    v = (v << 8) | addr[i];
  return v;
}

std::string IpPrefix::to_string() const {
  char buf[INET6_ADDRSTRLEN];
  int af = family == AddressFamily::ipv4 ? AF_INET : AF_INET6;
  if (!inet_ntop(af, addr.data(), buf, sizeof(buf)))
    return "?";
  return std::string(buf) + "/" + std::to_string(len);
}

std::optional<IpPrefix> IpPrefix::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos || slash + 1 >= text.size())
    return std::nullopt;
  std::string host = text.substr(0, slash);
  int len = 0;
  for (std::size_t i = slash + 1; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      return std::nullopt;
    len = len * 10 + (text[i] - '0');
    if (len > 128)
      return std::nullopt;
  }
  IpPrefix p;
  p.len = std::uint8_t(len);
  if (host.find(':') != std::string::npos) {
    p.family = AddressFamily::ipv6;
    if (inet_pton(AF_INET6, host.c_str(), p.addr.data()) != 1)
      return std::nullopt;
  } else {
    p.family = AddressFamily::ipv4;
    if (len > 32)
      return std::nullopt;
    if (inet_pton(AF_INET, host.c_str(), p.addr.data()) != 1)
      return std::nullopt;
  }
  p.canonicalize();
  return p;
}

} // namespace hegemony
