// Corpus files, the full classification pipeline, and reports.
//
// Corpus format, one entry per line:
//   name :: formula [:: expected-verdict] [# note]
// Blank lines and lines starting with '#' are ignored.

#ifndef PATHOLAB_CORPUS_HPP
#define PATHOLAB_CORPUS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patholab/formula.hpp"
#include "patholab/hereditary.hpp"
#include "patholab/modelfinder.hpp"
#include "patholab/refuter.hpp"
#include "patholab/strat.hpp"
#include "patholab/syntpatho.hpp"
#include "json.hpp"

namespace patholab::corpus {

enum class Verdict { ProvedPatho, CertifiedNonPatho, Unknown, Unsupported, Error };

const char* verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(const std::string& s);

struct Config {
  refuter::Budget budget;
  int model_size = 5;
};

struct CorpusEntry {
  std::string name;
  std::string formula_text;
  std::optional<Verdict> expected;
  std::string note;
  int line = 0;
};

struct CorpusLineError {
  int line;
  std::string message;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::vector<CorpusLineError> errors;
};

Corpus parse_corpus(const std::string& text);
Corpus load_corpus(const std::string& path);  // throws std::runtime_error if unreadable

// The classics shipped with the tool.
const std::string& bundled_corpus();

struct StageTimes {
  std::map<std::string, double> ms;  // parse, stratify, synt, refute, model, hereditary
};

struct ErrorInfo {
  std::string kind;  // "parse", "not nearly closed", "corpus line"
  std::string message;
  int line = 0;
  int column = 0;
};

struct Report {
  std::string name;
  std::string input;
  std::optional<ErrorInfo> error;

  // Everything below is present only when error is empty.
  Formula formula;      // classified formula (after the wrapper, if any)
  bool wrapped = false; // the input was closed and classified as B & (x = x)
  strat::StratResult strat;
  synt::SyntVerdict synt;
  Verdict verdict = Verdict::Error;
  refuter::RefuteResult refutation;
  bool proof_checked = false;
  std::optional<model::Model> model;
  std::string model_note;  // why no model search result is available
  std::optional<model::SizeClass> size;
  std::optional<hereditary::HereditaryReport> hereditary;
  std::vector<std::string> notes;

  std::optional<Verdict> expected;
  std::string corpus_note;
  StageTimes times;

  bool mismatch() const { return expected && *expected != verdict; }
};

// A closed formula B becomes B & (x = x); otherwise the formula is unchanged.
Formula with_wrapper(const Formula& f, bool* wrapped = nullptr);

Report classify(const CorpusEntry& entry, const Config& config);
Report classify_text(const std::string& formula_text, const Config& config);

struct RunReport {
  std::vector<Report> reports;  // sorted by name
  std::map<std::string, int> counts;
  int mismatches = 0;
  int errors = 0;
  double total_ms = 0;
};

RunReport run_corpus(const Corpus& corpus, const Config& config);

struct AuditPair {
  std::string name;
  std::string formula;
  std::string negation;
  Verdict verdict = Verdict::Error;
  Verdict negation_verdict = Verdict::Error;
  std::string error;
  bool both_patho() const {
    return verdict == Verdict::ProvedPatho && negation_verdict == Verdict::ProvedPatho;
  }
};

struct AuditReport {
  std::vector<AuditPair> pairs;  // sorted by name
  bool passed = true;
  double total_ms = 0;
};

// The negation drops a leading "not" or adds one.
Formula negate_candidate(const Formula& f);

AuditReport audit_1jt(const Corpus& corpus, const Config& config);

// Report serialization. Timing lives only under the top-level "timing" key.
nlohmann::ordered_json to_json(const Report& r, bool with_timing);
nlohmann::ordered_json to_json(const RunReport& r, const Config& config);
nlohmann::ordered_json to_json(const AuditReport& r, const Config& config);
nlohmann::ordered_json config_json(const Config& config);

std::string to_text(const Report& r);
std::string to_text(const RunReport& r);
std::string to_text(const AuditReport& r);

// Stable short identifier of a text (64-bit FNV-1a, hex).
std::string content_id(const std::string& text);

}  // namespace patholab::corpus

#endif  // PATHOLAB_CORPUS_HPP
