#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hegemony/types.hpp"

namespace hegemony {

enum class RejectReason : std::uint8_t { none, as_set, loop, reserved_asn, empty };

const char* to_string(RejectReason r);

enum class AsSetPolicy : std::uint8_t {
  reject,    // drop the whole path (default)
  truncate,  // keep the path up to the segment before the AS-set
};

struct NormalizePolicy {
  AsSetPolicy as_set = AsSetPolicy::reject;
  bool filter_reserved_asns = true;
};

/// Reserved/private ASNs that never identify a routable network:
/// 0, AS_TRANS (23456), 64512-65534, 4200000000-4294967294.
bool is_reserved_asn(Asn a);

struct NormalizeOutcome {
  std::optional<CleanPath> path;
  RejectReason reason = RejectReason::none;

  bool ok() const { return path.has_value(); }
};

/// Collapses prepending, applies the AS-set policy, rejects looped paths and
/// (under the default policy) paths carrying reserved ASNs. The result
/// contains each ASN at most once.
NormalizeOutcome normalize_path(const RawPath& raw, const NormalizePolicy& policy = {});

/// Marks viewpoints whose route count reaches `fraction` of the maximum
/// route count among the given viewpoints. Callers group by address family
/// before calling; the threshold self-calibrates per snapshot.
void classify_full_feed(std::vector<Viewpoint>& viewpoints, double fraction);

} // namespace hegemony
