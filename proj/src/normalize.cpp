#include "hegemony/normalize.hpp"

#include <algorithm>

namespace hegemony {

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::as_set: return "as_set";
    case RejectReason::loop: return "loop";
    case RejectReason::reserved_asn: return "reserved_asn";
    case RejectReason::empty: return "empty";
  }
  return "?";
}

bool is_reserved_asn(Asn a) {
  return a == 0 || a == 23456 || (a >= 64512 && a <= 65534)
         || (a >= 4200000000u && a <= 4294967294u);
}

NormalizeOutcome normalize_path(const RawPath& raw, const NormalizePolicy& policy) {
  std::vector<Asn> asns;
  asns.reserve(raw.size());
  for (const auto& seg : raw) {
    if (seg.is_set) {
      if (policy.as_set == AsSetPolicy::reject)
        return {std::nullopt, RejectReason::as_set};
      break; // truncate: keep what precedes the AS-set
    }
    if (!asns.empty() && asns.back() == seg.asn)
      continue; // prepending
    asns.push_back(seg.asn);
  }
  if (asns.empty())
    return {std::nullopt, RejectReason::empty};
  for (std::size_t i = 0; i < asns.size(); ++i)
    for (std::size_t j = i + 1; j < asns.size(); ++j)
      if (asns[i] == asns[j])
        return {std::nullopt, RejectReason::loop};
  if (policy.filter_reserved_asns)
    for (Asn a : asns)
      if (is_reserved_asn(a))
        return {std::nullopt, RejectReason::reserved_asn};
  return {CleanPath{std::move(asns)}, RejectReason::none};
}

void classify_full_feed(std::vector<Viewpoint>& viewpoints, double fraction) {
  std::uint64_t max_count = 0;
  for (const auto& v : viewpoints)
    max_count = std::max(max_count, v.route_count);
  double threshold = fraction * static_cast<double>(max_count);
  for (auto& v : viewpoints)
    v.full_feed = static_cast<double>(v.route_count) >= threshold;
}

} // namespace hegemony
