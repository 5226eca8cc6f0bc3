#include "patholab/hereditary.hpp"

#include <map>
#include <stdexcept>

#include "patholab/modelfinder.hpp"

namespace patholab::hereditary {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ProvedPatho: return "ProvedPatho";
    case Verdict::CertifiedNonPatho: return "CertifiedNonPatho";
    case Verdict::Unknown: return "Unknown";
    case Verdict::Skipped: return "Skipped";
  }
  return "?";
}

const char* overall_name(Overall o) {
  switch (o) {
    case Overall::SubPatho: return "SubPatho";
    case Overall::CertifiedHnP: return "CertifiedHnP";
    case Overall::Unknown: return "Unknown";
  }
  return "?";
}

Overall aggregate(const std::vector<Entry>& entries) {
  bool all_certified = true;
  for (const auto& e : entries) {
    if (e.verdict == Verdict::ProvedPatho) return Overall::SubPatho;
    if (e.verdict != Verdict::CertifiedNonPatho && e.verdict != Verdict::Skipped) all_certified = false;
  }
  return all_certified ? Overall::CertifiedHnP : Overall::Unknown;
}

namespace {

std::string skip_reason(const VarSet& free) {
  if (free.empty()) return "closed";
  std::string names;
  for (const auto& v : free) names += (names.empty() ? "" : ", ") + v;
  return std::to_string(free.size()) + " free variables: " + names;
}

}  // namespace

HereditaryReport hereditary_scan(const NearlyClosed& a, const refuter::Budget& budget, int max_size) {
  HereditaryReport report;
  std::map<std::string, std::pair<Verdict, std::string>> cache;
  std::size_t position = 0;
  for (const auto& sub : subformulas(a.formula)) {
    Entry e{position++, sub.formula, "", Verdict::Skipped, ""};
    if (sub.free.size() != 1) {
      e.reason = skip_reason(sub.free);
      report.entries.push_back(std::move(e));
      continue;
    }
    NearlyClosed candidate = canonicalize(NearlyClosed{sub.formula, *sub.free.begin()});
    e.canonical = print(candidate.formula);
    auto hit = cache.find(e.canonical);
    if (hit == cache.end()) {
      auto refuted = refuter::patho_check(candidate, budget);
      auto certified = model::certify_nonpatho(candidate, max_size);
      bool proved = std::holds_alternative<refuter::ProvedPatho>(refuted);
      bool has_model = std::holds_alternative<model::CertifiedNonPatho>(certified);
      if (proved && has_model) throw std::logic_error("refutation and model for " + e.canonical);
      std::pair<Verdict, std::string> outcome{Verdict::Unknown, ""};
      if (proved) {
        outcome.first = Verdict::ProvedPatho;
      } else if (has_model) {
        outcome.first = Verdict::CertifiedNonPatho;
      } else {
        outcome.second = "no refutation within budget and no model up to size " + std::to_string(max_size);
      }
      hit = cache.emplace(e.canonical, outcome).first;
    }
    e.verdict = hit->second.first;
    e.reason = hit->second.second;
    report.entries.push_back(std::move(e));
  }
  report.overall = aggregate(report.entries);
  return report;
}

}  // namespace patholab::hereditary
