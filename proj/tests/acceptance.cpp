// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "patholab/corpus.hpp"
#include "patholab/parser.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

using namespace patholab;
using nlohmann::json;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  double seconds = 0;
};

CliResult cli(const std::string& args) {
  auto start = std::chrono::steady_clock::now();
  std::string cmd = std::string(PATHOLAB_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

class Criterion {
 public:
  explicit Criterion(std::ostringstream& why) : why_(why) {}
  bool expect(bool ok, const std::string& what) {
    if (!ok && failed_++ < 5) why_ << (why_.tellp() > 0 ? "; " : "") << what;
    return ok;
  }
  bool ok() const { return failed_ == 0; }

 private:
  std::ostringstream& why_;
  int failed_ = 0;
};

NearlyClosed candidate(const Formula& f) {
  return std::get<NearlyClosed>(nearly_closed(corpus::with_wrapper(f)));
}

// The proof text in a JSON entry must parse and re-check against a freshly built theory.
bool proof_rechecks(const json& entry) {
  Formula f = parse(entry["formula"].get<std::string>());
  refuter::Proof proof = refuter::parse_proof(entry["refuter"]["proof"].get<std::string>());
  return refuter::check_proof(refuter::build_cosi_theory(candidate(f)), proof);
}

bool classify_json(const std::string& formula, json* entry, double* seconds) {
  CliResult r = cli("--format json classify " + quote(formula));
  *seconds = r.seconds;
  if (r.status != 0) return false;
  *entry = json::parse(r.out)["entry"];
  return true;
}

void criterion_russell(Criterion& c) {
  json e;
  double s;
  if (!c.expect(classify_json("not (x in x)", &e, &s), "classify failed")) return;
  c.expect(e["verdict"] == "ProvedPatho", "verdict " + e["verdict"].dump());
  c.expect(e["refuter"]["depth"] == 1, "depth " + e["refuter"]["depth"].dump());
  c.expect(proof_rechecks(e), "proof does not re-check");
  c.expect(e["syntactic"]["result"] == "SyntP" && e["syntactic"]["n"] == 1, "syntactic " + e["syntactic"].dump());
  c.expect(e["stratification"]["result"] == "Unstratified", "stratified");
  c.expect(e["hereditary"]["overall"] == "SubPatho", "hereditary " + e["hereditary"]["overall"].dump());
  c.expect(s < 1.0, "took " + std::to_string(s) + " s");
}

void criterion_ncn(Criterion& c) {
  for (int n : {2, 3}) {
    std::string text = print(synt::build_ncn(n));
    json e;
    double s;
    if (!c.expect(classify_json(text, &e, &s), "classify failed for " + text)) continue;
    c.expect(e["verdict"] == "ProvedPatho", text + " verdict " + e["verdict"].dump());
    c.expect(e["syntactic"]["n"] == n, text + " syntactic n");
    c.expect(proof_rechecks(e), text + " proof does not re-check");
    c.expect(s < 10.0, text + " took " + std::to_string(s) + " s");
  }
}

// Comprehension for the first abstraction and extensionality, evaluated directly.
bool model_reverifies(const model::Model& m, const Formula& a, const std::string& symbol) {
  int d = m.denotations.at(symbol);
  for (int y = 0; y < m.size; ++y)
    if (m.member(y, d) != model::eval_formula(m, a, {{"x", y}})) return false;
  for (int i = 0; i < m.size; ++i)
    for (int j = i + 1; j < m.size; ++j) {
      bool same = true;
      for (int k = 0; k < m.size; ++k) same &= m.member(k, i) == m.member(k, j);
      if (same) return false;
    }
  return true;
}

void criterion_logo(Criterion& c) {
  for (std::string text : {"Verum", "Falsum", "x in x"}) {
    json e;
    double s;
    if (!c.expect(classify_json(text, &e, &s), "classify failed for " + text)) continue;
    c.expect(e["verdict"] == "CertifiedNonPatho", text + " verdict " + e["verdict"].dump());
    const json& ms = e["model_search"];
    if (!c.expect(ms.contains("certificate"), text + " has no model")) continue;
    model::Model m = model::parse_model(ms["certificate"].get<std::string>());
    c.expect(m.size == 1, text + " model size " + std::to_string(m.size));
    Formula f = parse(e["formula"].get<std::string>());
    c.expect(model_reverifies(m, f, "c0"), text + " model does not re-verify");
  }
}

void criterion_agreement(Criterion& c) {
  std::vector<Formula> formulas;
  for (const auto& entry : corpus::parse_corpus(corpus::bundled_corpus()).entries)
    formulas.push_back(corpus::with_wrapper(parse(entry.formula_text)));
  oracle::FormulaGen gen(4242);
  for (int i = 0; i < 500; ++i) formulas.push_back(gen.nearly_closed(1 + gen.pick(4)));
  auto start = std::chrono::steady_clock::now();
  int proved = 0, certified = 0, unsupported = 0;
  refuter::Budget budget;
  for (const auto& f : formulas) {
    NearlyClosed a = candidate(f);
    bool refuted = std::holds_alternative<refuter::ProvedPatho>(refuter::patho_check(a, budget));
    bool has_model = false;
    try {
      has_model = std::holds_alternative<model::CertifiedNonPatho>(model::certify_nonpatho(a, 5));
    } catch (const model::UnsupportedTerm&) {
      ++unsupported;
    }
    proved += refuted;
    certified += has_model;
    c.expect(!(refuted && has_model), "both verdicts for " + print(f));
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(s < 300.0, "took " + std::to_string(s) + " s");
  std::cout << "  " << formulas.size() << " formulas: " << proved << " ProvedPatho, " << certified
            << " CertifiedNonPatho, " << unsupported << " unsupported, " << s << " s\n";
}

void criterion_audit(Criterion& c) {
  CliResult r = cli("--format json audit-1jt " PATHOLAB_SOURCE_DIR "/corpus/classics.txt");
  c.expect(r.status == 0, "exit status " + std::to_string(r.status));
  if (r.status == 0) c.expect(json::parse(r.out)["result"] == "PASS", "result is not PASS");
}

void criterion_strat_oracle(Criterion& c) {
  oracle::GenOptions options;
  options.set_abs_rate = 0.1;
  oracle::FormulaGen gen(8128, options);
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    Formula f = gen.nearly_closed(1 + gen.pick(4));
    auto sys = oracle::LevelExtractor().run(f);
    if (sys.nodes > 4) continue;
    ++compared;
    c.expect(strat::is_stratified(strat::stratify(f)) == oracle::brute_force_stratifiable(sys, 8),
             "disagreement on " + print(f));
  }
  c.expect(compared >= 500, "only " + std::to_string(compared) + " formulas compared");
  std::cout << "  " << compared << " formulas compared\n";
}

void criterion_stratified_not_patho(Criterion& c) {
  corpus::RunReport run = corpus::run_corpus(corpus::parse_corpus(corpus::bundled_corpus()), corpus::Config{});
  int stratified = 0;
  for (const auto& r : run.reports) {
    if (r.error || !strat::is_stratified(r.strat)) continue;
    ++stratified;
    c.expect(r.verdict != corpus::Verdict::ProvedPatho, r.name + " is stratified and ProvedPatho");
  }
  c.expect(stratified > 0, "no stratified entries");
}

void criterion_determinism(Criterion& c) {
  auto report = [&] {
    CliResult r = cli("--format json run " PATHOLAB_SOURCE_DIR "/corpus/classics.txt");
    c.expect(r.status == 0, "exit status " + std::to_string(r.status));
    json j = json::parse(r.out);
    j.erase("timing");
    return j.dump();
  };
  std::string first = report();
  c.expect(first == report(), "reports differ");
}

void criterion_round_trip(Criterion& c) {
  oracle::GenOptions options;
  options.allow_free = true;
  options.allow_functions = true;
  options.set_abs_rate = 0.15;
  oracle::FormulaGen gen(1000, options);
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.any(1 + gen.pick(6));
    std::string text = print(f);
    try {
      c.expect(alpha_equivalent(parse(text), f), "round trip changed " + text);
    } catch (const ParseError& e) {
      c.expect(false, "cannot parse " + text + ": " + e.what());
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"Russell's class is ProvedPatho at depth 1, SyntP n=1, Unstratified, SubPatho", criterion_russell},
      {"NC_2 and NC_3 are ProvedPatho with re-checked proofs", criterion_ncn},
      {"Verum, Falsum and x in x have re-verified size-1 models", criterion_logo},
      {"no formula is both ProvedPatho and CertifiedNonPatho", criterion_agreement},
      {"audit-1jt passes on the bundled corpus", criterion_audit},
      {"stratification matches brute-force level search", criterion_strat_oracle},
      {"no stratified bundled formula is ProvedPatho", criterion_stratified_not_patho},
      {"two corpus runs give identical reports without timing", criterion_determinism},
      {"1000 random ASTs survive print and parse", criterion_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream why;
    Criterion c(why);
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failures += !c.ok();
    std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!c.ok()) std::cout << " (" << why.str() << ")";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
