#include "hegemony/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace hegemony {

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

std::vector<const HegemonyScore*> ranked(const HegemonyResult& result,
                                         bool drop_origin) {
  std::vector<const HegemonyScore*> rows;
  rows.reserve(result.scores.size());
  for (const auto& s : result.scores) {
    if (drop_origin && result.scope.is_local() && s.asn == result.scope.origin)
      continue;
    rows.push_back(&s);
  }
  std::sort(rows.begin(), rows.end(), [](const HegemonyScore* a, const HegemonyScore* b) {
    if (a->hegemony != b->hegemony)
      return a->hegemony > b->hegemony;
    return a->asn < b->asn;
  });
  return rows;
}

void score_json(std::ostream& out, const HegemonyScore& s) {
  out << "{\"asn\":" << s.asn << ",\"hegemony\":" << format_score(s.hegemony)
      << ",\"n_viewpoints\":" << s.n_viewpoints << ",\"n_trimmed\":" << s.n_trimmed
      << ",\"low_confidence\":" << (s.low_confidence ? "true" : "false") << "}";
}

} // namespace

void write_global_csv(std::ostream& out, const HegemonyResult& result) {
  out << "scope,asn,hegemony,n_viewpoints,n_trimmed,low_confidence\n";
  for (const auto* s : ranked(result, false))
    out << result.scope.to_string() << ',' << s->asn << ',' << format_score(s->hegemony)
        << ',' << s->n_viewpoints << ',' << s->n_trimmed << ','
        << (s->low_confidence ? 1 : 0) << '\n';
}

void write_global_json(std::ostream& out, const HegemonyResult& result) {
  out << "{\"scope\":\"" << result.scope.to_string() << "\",\"alpha\":"
      << format_score(result.alpha) << ",\"n_viewpoints\":" << result.n_viewpoints
      << ",\"low_confidence\":" << (result.low_confidence ? "true" : "false")
      << ",\"scores\":[";
  bool first = true;
  for (const auto* s : ranked(result, false)) {
    if (!first)
      out << ',';
    first = false;
    score_json(out, *s);
  }
  out << "]}\n";
}

void write_local_csv(std::ostream& out, const std::map<Asn, HegemonyResult>& results) {
  out << "origin_asn,asn,hegemony,n_viewpoints,n_trimmed,low_confidence\n";
  for (const auto& [origin, result] : results)
    for (const auto* s : ranked(result, true))
      out << origin << ',' << s->asn << ',' << format_score(s->hegemony) << ','
          << s->n_viewpoints << ',' << s->n_trimmed << ','
          << (s->low_confidence ? 1 : 0) << '\n';
}

void write_local_json(std::ostream& out, const std::map<Asn, HegemonyResult>& results) {
  out << "{\"scope\":\"local\",\"origins\":[";
  bool first_origin = true;
  for (const auto& [origin, result] : results) {
    if (!first_origin)
      out << ',';
    first_origin = false;
    out << "{\"origin\":" << origin << ",\"alpha\":" << format_score(result.alpha)
        << ",\"n_viewpoints\":" << result.n_viewpoints << ",\"scores\":[";
    bool first = true;
    for (const auto* s : ranked(result, true)) {
      if (!first)
        out << ',';
      first = false;
      score_json(out, *s);
    }
    out << "]}";
  }
  out << "]}\n";
}

void write_kl_csv(std::ostream& out, const std::vector<KlRow>& rows) {
  out << "metric,k,trial,kl\n";
  for (const auto& r : rows)
    out << to_string(r.metric) << ',' << r.k << ',' << r.trial << ','
        << format_score(r.kl) << '\n';
}

void write_kl_json(std::ostream& out, const std::vector<KlRow>& rows) {
  out << "{\"rows\":[";
  bool first = true;
  for (const auto& r : rows) {
    if (!first)
      out << ',';
    first = false;
    out << "{\"metric\":\"" << to_string(r.metric) << "\",\"k\":" << r.k
        << ",\"trial\":" << r.trial << ",\"kl\":" << format_score(r.kl) << "}";
  }
  out << "]}\n";
}

std::vector<ScoreCsvRow> parse_scores_csv(std::istream& in) {
  std::vector<ScoreCsvRow> rows;
  std::string line;
  bool local_format = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (!have_header) {
      have_header = true;
      if (line.rfind("origin_asn,", 0) == 0)
        local_format = true;
      else if (line.rfind("scope,", 0) != 0)
        throw std::invalid_argument("not a hegemony score CSV");
      continue;
    }
    std::istringstream ls(line);
    std::string scope, asn, hegemony, rest;
    if (!std::getline(ls, scope, ',') || !std::getline(ls, asn, ',')
        || !std::getline(ls, hegemony, ',') || !std::getline(ls, rest))
      throw std::invalid_argument("malformed score CSV row: " + line);
    ScoreCsvRow row;
    row.scope = local_format ? "local:" + scope : scope;
    row.asn = Asn(std::stoul(asn));
    row.hegemony = hegemony;
    row.rest = rest;
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace hegemony
