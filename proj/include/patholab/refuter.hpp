// Refutation search for the comprehension theory of one candidate predicate.
//
// The theory for a nearly-closed A(x) consists of
//   * one comprehension instance  forall y: (y in c <-> B(y))  for every
//     distinct set abstraction {v : B} occurring in {x : A(x)} (the
//     abstraction itself is c0, nested ones c1, c2, ... in pre-order);
//     abstractions with free parameters p1..pk become function symbols
//     c_i(p1, ..., pk) and their instance is quantified over the parameters,
//   * extensionality,
//   * equality axioms: reflexivity, symmetry, transitivity, substitutivity
//     for membership on both sides and congruence for every function symbol.
//
// The search Skolemizes every sentence, converts to clauses, and instantiates
// clauses over the ground terms of increasing depth. After each depth the
// accumulated ground clauses are handed to a proof-logging CDCL solver. An
// unsatisfiable ground set yields a proof whose steps can be re-checked
// without the search engine (see check_proof and docs/proof-format.md).

#ifndef PATHOLAB_REFUTER_HPP
#define PATHOLAB_REFUTER_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab::refuter {

struct Abstraction {
  std::string symbol;               // c0, c1, ...
  std::vector<std::string> params;  // free parameters, empty for closed abstractions
  Term original;                    // the abstraction as written
  std::string bound_var;            // comprehension variable of the instance
  Formula instance_body;            // B with nested abstractions replaced; free in bound_var and params
};

struct Theory {
  std::vector<Formula> sentences;
  std::vector<std::string> labels;  // "comprehension c0", "extensionality", ...
  std::vector<Abstraction> abstractions;
  // Function symbols of positive arity in the signature (user symbols and
  // parameterized abstractions), and all constants.
  std::set<std::pair<std::string, std::size_t>> functions;
  std::set<std::string> constants;
};

Theory build_cosi_theory(const NearlyClosed& a);

struct Budget {
  int max_instantiation_depth = 3;
  long max_steps = 50000;
};

enum class Rule { Axiom, Skolem, Clausify, Inst, Resolve };

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);

struct ProofStep {
  int id;
  Rule rule;
  std::vector<int> premises;
  Formula formula;
};

struct Proof {
  std::vector<ProofStep> steps;
  int depth_used = 0;   // ground-term depth at which the refutation closed
  long steps_used = 0;  // ground clause instances generated
};

struct BudgetExhausted {
  Budget budget;
  int depth_reached = 0;  // deepest level fully instantiated and found satisfiable
  long steps_used = 0;
  std::string reason;
};

using RefuteResult = std::variant<Proof, BudgetExhausted>;

RefuteResult refute(const Theory& t, const Budget& b);

// Independent re-check of every step. The last step must derive Falsum.
bool check_proof(const Theory& t, const Proof& p, std::string* error = nullptr);

// One step per line: "<id> <rule> <premise-ids|-> <formula-text>".
std::string serialize_proof(const Proof& p);
// Free identifiers in the formula text are read as constants.
Proof parse_proof(const std::string& text);

struct ProvedPatho {
  Proof proof;
};
struct Unknown {
  BudgetExhausted exhausted;
};
using PathoResult = std::variant<ProvedPatho, Unknown>;

PathoResult patho_check(const NearlyClosed& a, const Budget& b);

// Replaces free variables by constants of the same name.
Formula close_with_constants(const Formula& f);

}  // namespace patholab::refuter

#endif  // PATHOLAB_REFUTER_HPP
