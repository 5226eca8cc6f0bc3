#include "patholab/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "patholab/parser.hpp"

namespace patholab::corpus {

using nlohmann::ordered_json;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ProvedPatho: return "ProvedPatho";
    case Verdict::CertifiedNonPatho: return "CertifiedNonPatho";
    case Verdict::Unknown: return "Unknown";
    case Verdict::Unsupported: return "Unsupported";
    case Verdict::Error: return "Error";
  }
  return "?";
}

std::optional<Verdict> verdict_from_name(const std::string& s) {
  for (Verdict v : {Verdict::ProvedPatho, Verdict::CertifiedNonPatho, Verdict::Unknown, Verdict::Unsupported,
                    Verdict::Error}) {
    if (s == verdict_name(v)) return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Corpus files

namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find("::", start);
    if (pos == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      return fields;
    }
    fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 2;
  }
}

}  // namespace

Corpus parse_corpus(const std::string& text) {
  Corpus corpus;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::string note;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      note = trim(std::string_view(line).substr(hash + 1));
      line = trim(std::string_view(line).substr(0, hash));
    }
    auto fields = split_fields(line);
    auto error = [&](std::string message) { corpus.errors.push_back({line_no, std::move(message)}); };
    if (fields.size() < 2 || fields.size() > 3) {
      error("expected 'name :: formula [:: expected]'");
      continue;
    }
    if (fields[0].empty() || fields[1].empty()) {
      error("empty name or formula");
      continue;
    }
    CorpusEntry e{fields[0], fields[1], std::nullopt, note, line_no};
    if (fields.size() == 3) {
      e.expected = verdict_from_name(fields[2]);
      if (!e.expected) {
        error("unknown expected verdict '" + fields[2] + "'");
        continue;
      }
    }
    if (auto [it, inserted] = seen.emplace(e.name, line_no); !inserted) {
      error("duplicate name '" + e.name + "' (first on line " + std::to_string(it->second) + ")");
      continue;
    }
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read corpus file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_corpus(text.str());
}

const std::string& bundled_corpus() {
  static const std::string text = R"(# Classic candidate predicates for naive comprehension.
# name :: formula [:: expected verdict] [# note]

russell :: not (x in x) :: ProvedPatho  # Russell's class
nc2 :: not exists a: ((x in a) & (a in x)) :: ProvedPatho  # no 2-cycle through x
nc3 :: not exists a: exists b: ((x in a) & (a in b) & (b in x)) :: ProvedPatho  # no 3-cycle through x
nc2_derivative :: not exists a: (((x in a) | Falsum) & (a in x)) :: ProvedPatho  # NC_2 with an empty "or B" insertion
russell_or_falsum :: not ((x in x) | Falsum) :: ProvedPatho  # NC_1 with an empty "or B" insertion
russell_full_exception :: not ((x in x) & not Verum) :: CertifiedNonPatho  # the exception swallows everything
verum :: Verum :: CertifiedNonPatho  # universal class
falsum :: Falsum :: CertifiedNonPatho  # empty class
self_member :: x in x :: CertifiedNonPatho  # Quine atoms
subsingleton :: forall y: ((y in x) -> (y = x)) :: CertifiedNonPatho
nonempty :: exists y: (y in x) :: CertifiedNonPatho
has_nonself_member :: exists y: ((y in x) & not (y in y)) :: CertifiedNonPatho  # contains Russell as a subformula

# Documentation only: the complement of the diagonal class of a function f
# quantifies over functions; the model search does not interpret f.
ko_di_f :: not (x in f(x)) :: Unsupported
)";
  return text;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Verdict combine(Report& r, bool proved, bool unsupported) {
  if (proved && r.model) throw std::logic_error("refutation and model for " + print(r.formula));
  if (proved) return r.proof_checked ? Verdict::ProvedPatho : Verdict::Unknown;
  if (r.model) return Verdict::CertifiedNonPatho;
  return unsupported ? Verdict::Unsupported : Verdict::Unknown;
}

}  // namespace

Formula with_wrapper(const Formula& f, bool* wrapped) {
  bool closed = free_vars(f).empty();
  if (wrapped) *wrapped = closed;
  if (!closed) return f;
  return Formula::conjunction(f, Formula::equality(Term::variable("x"), Term::variable("x")));
}

Report classify(const CorpusEntry& entry, const Config& config) {
  Report r;
  r.name = entry.name;
  r.input = entry.formula_text;
  r.expected = entry.expected;
  r.corpus_note = entry.note;

  Stopwatch parse_time;
  Formula parsed;
  try {
    ParseResult pr = parse_with_warnings(entry.formula_text);
    parsed = pr.formula;
    for (const auto& w : pr.warnings) r.notes.push_back("parser: " + w);
  } catch (const ParseError& e) {
    r.error = ErrorInfo{"parse", e.what(), e.line(), e.column()};
    r.times.ms["parse"] = parse_time.ms();
    return r;
  }
  r.formula = with_wrapper(parsed, &r.wrapped);
  if (r.wrapped) r.notes.push_back("closed formula classified as (B & (x = x))");
  auto nc = nearly_closed(r.formula);
  r.times.ms["parse"] = parse_time.ms();
  if (auto* rej = std::get_if<Rejection>(&nc)) {
    std::string names;
    for (const auto& v : rej->free) names += (names.empty() ? "" : ", ") + v;
    r.error = ErrorInfo{"not nearly closed", "free variables: " + names, 0, 0};
    return r;
  }
  const NearlyClosed& candidate = std::get<NearlyClosed>(nc);

  Stopwatch strat_time;
  r.strat = strat::stratify(r.formula);
  r.times.ms["stratify"] = strat_time.ms();

  Stopwatch synt_time;
  r.synt = synt::synt_classify(r.formula);
  r.times.ms["synt"] = synt_time.ms();

  Stopwatch refute_time;
  refuter::Theory theory = refuter::build_cosi_theory(candidate);
  r.refutation = refuter::refute(theory, config.budget);
  bool proved = false;
  if (auto* proof = std::get_if<refuter::Proof>(&r.refutation)) {
    proved = true;
    std::string why;
    r.proof_checked = refuter::check_proof(theory, *proof, &why);
    if (!r.proof_checked) r.notes.push_back("proof failed re-check: " + why);
  }
  r.times.ms["refute"] = refute_time.ms();

  Stopwatch model_time;
  bool unsupported = false;
  try {
    auto certified = model::certify_nonpatho(candidate, config.model_size);
    if (auto* c = std::get_if<model::CertifiedNonPatho>(&certified)) {
      r.model = c->model;
      r.size = model::size_class(c->model, theory.abstractions.front().symbol);
    } else {
      r.model_note = "no model up to size " + std::to_string(config.model_size);
    }
  } catch (const model::UnsupportedTerm& e) {
    unsupported = true;
    r.model_note = std::string("unsupported: ") + e.what();
  }
  r.times.ms["model"] = model_time.ms();

  Stopwatch hereditary_time;
  try {
    r.hereditary = hereditary::hereditary_scan(candidate, config.budget, config.model_size);
  } catch (const model::UnsupportedTerm& e) {
    r.notes.push_back(std::string("hereditary scan unsupported: ") + e.what());
  }
  r.times.ms["hereditary"] = hereditary_time.ms();

  r.verdict = combine(r, proved, unsupported);
  return r;
}

Report classify_text(const std::string& formula_text, const Config& config) {
  return classify(CorpusEntry{"formula", formula_text, std::nullopt, "", 0}, config);
}

namespace {

template <typename Item, typename Fn>
std::vector<Item> parallel_map(std::size_t count, Fn fn) {
  std::vector<Item> out(count);
  std::atomic<std::size_t> next{0};
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  if (count) work();
  for (auto& t : threads) t.join();
  return out;
}

Report line_error_report(const CorpusLineError& e) {
  Report r;
  r.name = "line " + std::to_string(e.line);
  r.error = ErrorInfo{"corpus line", e.message, e.line, 0};
  return r;
}

}  // namespace

RunReport run_corpus(const Corpus& corpus, const Config& config) {
  Stopwatch total;
  RunReport run;
  run.reports = parallel_map<Report>(corpus.entries.size(),
                                     [&](std::size_t i) { return classify(corpus.entries[i], config); });
  for (const auto& e : corpus.errors) run.reports.push_back(line_error_report(e));
  std::stable_sort(run.reports.begin(), run.reports.end(),
                   [](const Report& a, const Report& b) { return a.name < b.name; });
  for (Verdict v : {Verdict::ProvedPatho, Verdict::CertifiedNonPatho, Verdict::Unknown, Verdict::Unsupported,
                    Verdict::Error}) {
    run.counts[verdict_name(v)] = 0;
  }
  for (const auto& r : run.reports) {
    ++run.counts[verdict_name(r.error ? Verdict::Error : r.verdict)];
    if (r.error) ++run.errors;
    if (r.mismatch()) ++run.mismatches;
  }
  run.total_ms = total.ms();
  return run;
}

// ---------------------------------------------------------------------------
// Audit: a formula and its negation must not both be pathological

Formula negate_candidate(const Formula& f) {
  if (f.kind() == FormulaKind::Not) return f.child();
  return Formula::negation(f);
}

namespace {

Verdict quick_verdict(const Formula& f, const Config& config) {
  auto nc = nearly_closed(f);
  if (!std::holds_alternative<NearlyClosed>(nc)) return Verdict::Error;
  const auto& candidate = std::get<NearlyClosed>(nc);
  refuter::Theory theory = refuter::build_cosi_theory(candidate);
  auto refuted = refuter::refute(theory, config.budget);
  bool proved = false;
  if (auto* p = std::get_if<refuter::Proof>(&refuted)) proved = refuter::check_proof(theory, *p);
  bool has_model = false, unsupported = false;
  try {
    has_model = std::holds_alternative<model::CertifiedNonPatho>(model::certify_nonpatho(candidate, config.model_size));
  } catch (const model::UnsupportedTerm&) {
    unsupported = true;
  }
  if (proved && has_model) throw std::logic_error("refutation and model for " + print(f));
  if (proved) return Verdict::ProvedPatho;
  if (has_model) return Verdict::CertifiedNonPatho;
  return unsupported ? Verdict::Unsupported : Verdict::Unknown;
}

}  // namespace

AuditReport audit_1jt(const Corpus& corpus, const Config& config) {
  Stopwatch total;
  AuditReport audit;
  audit.pairs = parallel_map<AuditPair>(corpus.entries.size(), [&](std::size_t i) {
    const auto& e = corpus.entries[i];
    AuditPair p;
    p.name = e.name;
    try {
      Formula a = with_wrapper(parse(e.formula_text));
      Formula neg = with_wrapper(negate_candidate(a));
      p.formula = print(a);
      p.negation = print(neg);
      p.verdict = quick_verdict(a, config);
      p.negation_verdict = quick_verdict(neg, config);
    } catch (const ParseError& err) {
      p.error = err.what();
    }
    return p;
  });
  for (const auto& e : corpus.errors) {
    AuditPair p;
    p.name = "line " + std::to_string(e.line);
    p.error = e.message;
    audit.pairs.push_back(std::move(p));
  }
  std::stable_sort(audit.pairs.begin(), audit.pairs.end(),
                   [](const AuditPair& a, const AuditPair& b) { return a.name < b.name; });
  audit.passed = std::none_of(audit.pairs.begin(), audit.pairs.end(), [](const AuditPair& p) { return p.both_patho(); });
  audit.total_ms = total.ms();
  return audit;
}

// ---------------------------------------------------------------------------
// Serialization

std::string content_id(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json config_json(const Config& config) {
  return ordered_json{{"refute_depth", config.budget.max_instantiation_depth},
                      {"refute_steps", config.budget.max_steps},
                      {"model_size", config.model_size}};
}

namespace {

ordered_json strat_json(const strat::StratResult& s) {
  if (auto* st = std::get_if<strat::Stratified>(&s)) {
    ordered_json levels = ordered_json::object();
    for (const auto& [v, l] : st->levels) levels[v] = l;
    return {{"result", "Stratified"}, {"levels", levels}};
  }
  const auto& u = std::get<strat::Unstratified>(s);
  ordered_json cycle = ordered_json::array();
  for (const auto& step : u.cycle) cycle.push_back({{"from", step.from}, {"to", step.to}, {"delta", step.delta}});
  return {{"result", "Unstratified"}, {"offset_sum", u.offset_sum()}, {"cycle", cycle}};
}

ordered_json synt_json(const synt::SyntVerdict& v) {
  if (auto* p = std::get_if<synt::SyntP>(&v)) {
    ordered_json insertions = ordered_json::array();
    for (const auto& ins : p->match.insertions) {
      insertions.push_back({{"position", ins.position},
                            {"kind", synt::insertion_kind_name(ins.kind)},
                            {"formula", print(ins.inserted)}});
    }
    return {{"result", "SyntP"},
            {"n", p->match.n},
            {"derivative", !p->match.insertions.empty()},
            {"witness", print(p->witness)},
            {"insertions", insertions}};
  }
  return {{"result", "SyntHnP"}};
}

ordered_json refuter_json(const Report& r) {
  if (auto* p = std::get_if<refuter::Proof>(&r.refutation)) {
    std::string text = refuter::serialize_proof(*p);
    return {{"outcome", "refuted"},
            {"proof_id", "proof-" + content_id(text)},
            {"depth", p->depth_used},
            {"instances", p->steps_used},
            {"proof_steps", p->steps.size()},
            {"checked", r.proof_checked},
            {"proof", text}};
  }
  const auto& b = std::get<refuter::BudgetExhausted>(r.refutation);
  return {{"outcome", "budget exhausted"},
          {"depth_reached", b.depth_reached},
          {"instances", b.steps_used},
          {"reason", b.reason}};
}

ordered_json model_json(const Report& r) {
  if (!r.model) return {{"outcome", r.model_note.rfind("unsupported", 0) == 0 ? "unsupported" : "not found"},
                        {"detail", r.model_note}};
  std::string text = model::serialize_model(*r.model);
  ordered_json j{{"outcome", "found"}, {"model_id", "model-" + content_id(text)}, {"size", r.model->size}};
  if (r.size) {
    j["size_class"] = {{"kind", model::size_kind_name(r.size->kind)},
                       {"members", r.size->members},
                       {"complement", r.size->complement}};
  }
  j["certificate"] = text;
  return j;
}

ordered_json hereditary_json(const hereditary::HereditaryReport& h) {
  ordered_json entries = ordered_json::array();
  int checked = 0, skipped = 0;
  for (const auto& e : h.entries) {
    ordered_json j{{"position", e.position}, {"subformula", print(e.subformula)}, {"verdict", hereditary::verdict_name(e.verdict)}};
    if (e.verdict == hereditary::Verdict::Skipped) {
      ++skipped;
    } else {
      ++checked;
      j["canonical"] = e.canonical;
    }
    if (!e.reason.empty()) j["reason"] = e.reason;
    entries.push_back(std::move(j));
  }
  return {{"overall", hereditary::overall_name(h.overall)}, {"checked", checked}, {"skipped", skipped}, {"entries", entries}};
}

ordered_json timing_json(const Report& r) {
  ordered_json t = ordered_json::object();
  for (const auto& [stage, ms] : r.times.ms) t[stage] = ms;
  return t;
}

}  // namespace

ordered_json to_json(const Report& r, bool with_timing) {
  ordered_json j;
  j["name"] = r.name;
  j["input"] = r.input;
  if (r.error) {
    j["verdict"] = verdict_name(Verdict::Error);
    j["error"] = {{"kind", r.error->kind}, {"message", r.error->message}};
    if (r.error->line) j["error"]["line"] = r.error->line;
    if (r.error->column) j["error"]["column"] = r.error->column;
  } else {
    j["formula"] = print(r.formula);
    j["nearly_closed"] = true;
    j["wrapped"] = r.wrapped;
    j["verdict"] = verdict_name(r.verdict);
    j["stratification"] = strat_json(r.strat);
    j["syntactic"] = synt_json(r.synt);
    j["refuter"] = refuter_json(r);
    j["model_search"] = model_json(r);
    j["hereditary"] = r.hereditary ? hereditary_json(*r.hereditary) : ordered_json(nullptr);
  }
  j["expected"] = r.expected ? ordered_json(verdict_name(*r.expected)) : ordered_json(nullptr);
  j["matches_expected"] = r.expected ? ordered_json(!r.mismatch()) : ordered_json(nullptr);
  if (!r.corpus_note.empty()) j["note"] = r.corpus_note;
  j["notes"] = r.notes;
  if (with_timing) j["timing"] = timing_json(r);
  return j;
}

ordered_json to_json(const RunReport& run, const Config& config) {
  ordered_json entries = ordered_json::array();
  ordered_json timing{{"total_ms", run.total_ms}, {"entries", ordered_json::object()}};
  for (const auto& r : run.reports) {
    entries.push_back(to_json(r, false));
    timing["entries"][r.name] = timing_json(r);
  }
  ordered_json summary{{"entries", run.reports.size()}};
  for (const auto& [name, count] : run.counts) summary[name] = count;
  summary["mismatches"] = run.mismatches;
  summary["errors"] = run.errors;
  return {{"command", "run"}, {"config", config_json(config)}, {"entries", entries}, {"summary", summary}, {"timing", timing}};
}

ordered_json to_json(const AuditReport& audit, const Config& config) {
  ordered_json pairs = ordered_json::array();
  for (const auto& p : audit.pairs) {
    ordered_json j{{"name", p.name}};
    if (!p.error.empty()) {
      j["error"] = p.error;
    } else {
      j["formula"] = p.formula;
      j["verdict"] = verdict_name(p.verdict);
      j["negation"] = p.negation;
      j["negation_verdict"] = verdict_name(p.negation_verdict);
      j["both_patho"] = p.both_patho();
    }
    pairs.push_back(std::move(j));
  }
  return {{"command", "audit-1jt"},
          {"config", config_json(config)},
          {"result", audit.passed ? "PASS" : "FAIL"},
          {"pairs", pairs},
          {"timing", {{"total_ms", audit.total_ms}}}};
}

namespace {

std::string synt_text(const synt::SyntVerdict& v) {
  if (auto* p = std::get_if<synt::SyntP>(&v)) return "SyntP " + synt::describe(p->match) + " in " + print(p->witness);
  return "SyntHnP";
}

}  // namespace

std::string to_text(const Report& r) {
  std::ostringstream out;
  out << "name            " << r.name << "\n";
  if (r.error) {
    out << "error           " << r.error->kind << ": " << r.error->message << "\n";
    return out.str();
  }
  out << "formula         " << print(r.formula) << (r.wrapped ? "  (closed input, wrapped)" : "") << "\n";
  out << "verdict         " << verdict_name(r.verdict);
  if (r.expected) out << (r.mismatch() ? "  MISMATCH, expected " : "  as expected ") << verdict_name(*r.expected);
  out << "\n";
  out << "stratification  " << strat::describe(r.strat) << "\n";
  out << "syntactic       " << synt_text(r.synt) << "\n";
  if (auto* p = std::get_if<refuter::Proof>(&r.refutation)) {
    out << "refuter         proof-" << content_id(refuter::serialize_proof(*p)) << " at depth " << p->depth_used << ", "
        << p->steps_used << " instances, " << p->steps.size() << " proof steps, "
        << (r.proof_checked ? "re-checked" : "FAILED re-check") << "\n";
  } else {
    const auto& b = std::get<refuter::BudgetExhausted>(r.refutation);
    out << "refuter         no refutation (" << b.reason << ", " << b.steps_used << " instances)\n";
  }
  if (r.model) {
    out << "model search    model-" << content_id(model::serialize_model(*r.model)) << " of size " << r.model->size;
    if (r.size) {
      out << ", extension " << model::size_kind_name(r.size->kind) << " (" << r.size->members << " vs "
          << r.size->complement << ")";
    }
    out << "\n";
  } else {
    out << "model search    " << r.model_note << "\n";
  }
  if (r.hereditary) {
    int checked = 0;
    for (const auto& e : r.hereditary->entries) checked += e.verdict != hereditary::Verdict::Skipped;
    out << "hereditary      " << hereditary::overall_name(r.hereditary->overall) << " (" << checked << " of "
        << r.hereditary->entries.size() << " subformulas checked)\n";
    for (const auto& e : r.hereditary->entries) {
      if (e.verdict == hereditary::Verdict::ProvedPatho) out << "                patho subformula: " << print(e.subformula) << "\n";
    }
  }
  for (const auto& n : r.notes) out << "note            " << n << "\n";
  return out.str();
}

std::string to_text(const RunReport& run) {
  std::ostringstream out;
  std::size_t width = 4;
  for (const auto& r : run.reports) width = std::max(width, r.name.size());
  for (const auto& r : run.reports) {
    std::string verdict = verdict_name(r.error ? Verdict::Error : r.verdict);
    out << r.name << std::string(width + 2 - r.name.size(), ' ') << verdict << std::string(19 - std::min<std::size_t>(verdict.size(), 18), ' ');
    if (r.error) {
      out << r.error->kind << ": " << r.error->message;
    } else {
      out << (strat::is_stratified(r.strat) ? "Stratified   " : "Unstratified ") << (synt::is_syntp(r.synt) ? "SyntP   " : "SyntHnP ")
          << (r.hereditary ? hereditary::overall_name(r.hereditary->overall) : "-");
    }
    if (r.mismatch()) out << "  MISMATCH, expected " << verdict_name(*r.expected);
    out << "\n";
  }
  out << "\n" << run.reports.size() << " entries:";
  for (const auto& [name, count] : run.counts) {
    if (count) out << " " << name << " " << count << ";";
  }
  out << " mismatches " << run.mismatches << "; errors " << run.errors << "\n";
  return out.str();
}

std::string to_text(const AuditReport& audit) {
  std::ostringstream out;
  for (const auto& p : audit.pairs) {
    out << p.name << ": ";
    if (!p.error.empty()) {
      out << "error: " << p.error << "\n";
      continue;
    }
    out << verdict_name(p.verdict) << " / negation " << verdict_name(p.negation_verdict)
        << (p.both_patho() ? "  BOTH PATHO" : "") << "\n";
  }
  out << "1JT audit " << (audit.passed ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace patholab::corpus
