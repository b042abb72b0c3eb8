#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hegemony/core.hpp"
#include "hegemony/simulator.hpp"

namespace hegemony {

/// Scores render with 9 significant digits everywhere.
std::string format_score(double v);

/// `scope,asn,hegemony,n_viewpoints,n_trimmed,low_confidence`, rows sorted by
/// hegemony descending then ASN.
void write_global_csv(std::ostream& out, const HegemonyResult& result);
void write_global_json(std::ostream& out, const HegemonyResult& result);

/// Long format `origin_asn,asn,hegemony,n_viewpoints,n_trimmed,low_confidence`,
/// origin rows omitted (a local graph's origin always scores 1), sorted by
/// (origin, hegemony descending, asn).
void write_local_csv(std::ostream& out, const std::map<Asn, HegemonyResult>& results);
void write_local_json(std::ostream& out, const std::map<Asn, HegemonyResult>& results);

/// `metric,k,trial,kl`
void write_kl_csv(std::ostream& out, const std::vector<KlRow>& rows);
void write_kl_json(std::ostream& out, const std::vector<KlRow>& rows);

/// One parsed row of a previously written score CSV. Values pass through as
/// text so concatenation never re-rounds them.
struct ScoreCsvRow {
  std::string scope; // "global" or "local:<origin>"
  Asn asn = 0;
  std::string hegemony;
  std::string rest; // n_viewpoints,n_trimmed,low_confidence
};

/// Reads rows written by write_global_csv or write_local_csv.
std::vector<ScoreCsvRow> parse_scores_csv(std::istream& in);

} // namespace hegemony
