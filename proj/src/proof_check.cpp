// Proof checker. Relies only on the formula utilities and the Skolem normal
// form definition, never on the search engine.

#include <algorithm>
#include <map>
#include <set>

#include "patholab/normal_form.hpp"
#include "patholab/refuter.hpp"

namespace patholab::refuter {

namespace {

bool fail(std::string* error, const std::string& message) {
  if (error) *error = message;
  return false;
}

bool quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  if (f.kind() == FormulaKind::Not) return quantifier_free(f.child());
  if (f.is_binary()) return quantifier_free(f.left()) && quantifier_free(f.right());
  return true;
}

// ---------------------------------------------------------------------------
// Skolem steps: equal to the Skolem form of the premise up to an injective
// renaming of the placeholder symbols "?k" and of bound variables.

class SymbolMatcher {
 public:
  std::map<std::string, std::string> symbols;

  bool formula(const Formula& expected, const Formula& actual) {
    if (expected.kind() != actual.kind()) return false;
    switch (expected.kind()) {
      case FormulaKind::Membership:
      case FormulaKind::Equality:
        return term(expected.lhs_term(), actual.lhs_term()) && term(expected.rhs_term(), actual.rhs_term());
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        return true;
      case FormulaKind::Not:
        return formula(expected.child(), actual.child());
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        scope_.emplace_back(expected.var(), actual.var());
        bool ok = formula(expected.body(), actual.body());
        scope_.pop_back();
        return ok;
      }
      default:
        return formula(expected.left(), actual.left()) && formula(expected.right(), actual.right());
    }
  }

 private:
  bool term(const Term& e, const Term& a) {
    bool placeholder = !e.name().empty() && e.name()[0] == '?';
    if (placeholder) {
      if (e.kind() != a.kind() || e.args().size() != a.args().size()) return false;
      auto [it, inserted] = symbols.emplace(e.name(), a.name());
      if (!inserted && it->second != a.name()) return false;
      if (inserted) {
        for (const auto& [k, v] : symbols) {
          if (k != e.name() && v == a.name()) return false;
        }
      }
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (!term(e.args()[i], a.args()[i])) return false;
      }
      return true;
    }
    if (e.kind() != a.kind()) return false;
    switch (e.kind()) {
      case TermKind::Variable: {
        for (std::size_t i = scope_.size(); i-- > 0;) {
          bool le = scope_[i].first == e.name(), la = scope_[i].second == a.name();
          if (le || la) return le && la;
        }
        return e.name() == a.name();
      }
      case TermKind::Constant:
        return e.name() == a.name();
      case TermKind::FnApp:
        if (e.name() != a.name() || e.args().size() != a.args().size()) return false;
        for (std::size_t i = 0; i < e.args().size(); ++i) {
          if (!term(e.args()[i], a.args()[i])) return false;
        }
        return true;
      case TermKind::SetAbs:
        return false;
    }
    return false;
  }

  std::vector<std::pair<std::string, std::string>> scope_;
};

// ---------------------------------------------------------------------------
// Propositional entailment with atoms compared by printed form.

class Entailment {
 public:
  // True iff `premise` (quantifier-free) propositionally entails the clause.
  bool operator()(const Formula& premise, const nf::Clause& clause) {
    for (const auto& lit : clause) {
      bool negated = lit.kind() == FormulaKind::Not;
      std::string key = print(negated ? lit.child() : lit);
      int8_t falsifying = negated ? 1 : 0;
      auto [it, inserted] = assignment_.emplace(key, falsifying);
      if (!inserted && it->second != falsifying) return true;  // tautology
    }
    collect(premise);
    return !satisfiable(premise, 0);
  }

 private:
  void collect(const Formula& f) {
    if (f.is_atom()) {
      std::string key = print(f);
      if (!assignment_.contains(key) && std::find(free_.begin(), free_.end(), key) == free_.end()) {
        free_.push_back(key);
      }
    } else if (f.kind() == FormulaKind::Not) {
      collect(f.child());
    } else if (f.is_binary()) {
      collect(f.left());
      collect(f.right());
    }
  }

  // Kleene evaluation: 1 true, 0 false, -1 undetermined.
  int8_t eval(const Formula& f) const {
    using K = FormulaKind;
    switch (f.kind()) {
      case K::Membership:
      case K::Equality: {
        auto it = assignment_.find(print(f));
        return it == assignment_.end() ? -1 : it->second;
      }
      case K::Verum: return 1;
      case K::Falsum: return 0;
      case K::Not: {
        int8_t v = eval(f.child());
        return v < 0 ? -1 : static_cast<int8_t>(1 - v);
      }
      case K::And: {
        int8_t a = eval(f.left()), b = eval(f.right());
        if (a == 0 || b == 0) return 0;
        return (a == 1 && b == 1) ? 1 : -1;
      }
      case K::Or: {
        int8_t a = eval(f.left()), b = eval(f.right());
        if (a == 1 || b == 1) return 1;
        return (a == 0 && b == 0) ? 0 : -1;
      }
      case K::Implies: {
        int8_t a = eval(f.left()), b = eval(f.right());
        if (a == 0 || b == 1) return 1;
        return (a == 1 && b == 0) ? 0 : -1;
      }
      case K::Iff: {
        int8_t a = eval(f.left()), b = eval(f.right());
        if (a < 0 || b < 0) return -1;
        return a == b ? 1 : 0;
      }
      default:
        return -1;
    }
  }

  bool satisfiable(const Formula& f, std::size_t next) {
    int8_t v = eval(f);
    if (v >= 0) return v == 1;
    if (next >= free_.size()) return false;
    for (int8_t value : {int8_t{0}, int8_t{1}}) {
      assignment_[free_[next]] = value;
      bool ok = satisfiable(f, next + 1);
      assignment_.erase(free_[next]);
      if (ok) return true;
    }
    return false;
  }

  std::map<std::string, int8_t> assignment_;
  std::vector<std::string> free_;
};

// ---------------------------------------------------------------------------
// Instantiation matching: pattern variables bind to closed terms.

class InstanceMatcher {
 public:
  explicit InstanceMatcher(const std::vector<std::string>& vars) : vars_(vars.begin(), vars.end()) {}

  bool formula(const Formula& p, const Formula& g) {
    if (p.kind() != g.kind()) return false;
    switch (p.kind()) {
      case FormulaKind::Membership:
      case FormulaKind::Equality:
        return term(p.lhs_term(), g.lhs_term()) && term(p.rhs_term(), g.rhs_term());
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        return true;
      case FormulaKind::Not:
        return formula(p.child(), g.child());
      default:
        if (!p.is_binary()) return false;
        return formula(p.left(), g.left()) && formula(p.right(), g.right());
    }
  }

 private:
  bool term(const Term& p, const Term& g) {
    if (p.kind() == TermKind::Variable && vars_.contains(p.name())) {
      auto [it, inserted] = binding_.emplace(p.name(), g);
      return inserted || it->second == g;
    }
    if (p.kind() != g.kind() || p.name() != g.name()) return false;
    if (p.kind() == TermKind::SetAbs) return false;
    if (p.args().size() != g.args().size()) return false;
    for (std::size_t i = 0; i < p.args().size(); ++i) {
      if (!term(p.args()[i], g.args()[i])) return false;
    }
    return true;
  }

  std::set<std::string> vars_;
  std::map<std::string, Term> binding_;
};

std::set<std::string> literal_keys(const nf::Clause& c) {
  std::set<std::string> keys;
  for (const auto& l : c) keys.insert(print(l));
  return keys;
}

bool ground(const Formula& f) { return free_vars(f).empty() && quantifier_free(f); }

}  // namespace

bool check_proof(const Theory& t, const Proof& p, std::string* error) {
  if (p.steps.empty()) return fail(error, "empty proof");

  VarSet used_names;
  for (const auto& s : t.sentences) {
    VarSet n = all_names(s);
    used_names.insert(n.begin(), n.end());
  }

  std::map<int, const ProofStep*> seen;
  for (const auto& step : p.steps) {
    const std::string where = "step " + std::to_string(step.id) + ": ";
    if (step.formula.empty()) return fail(error, where + "missing formula");
    if (seen.contains(step.id)) return fail(error, where + "duplicate id");
    std::vector<const ProofStep*> premises;
    for (int id : step.premises) {
      auto it = seen.find(id);
      if (it == seen.end()) return fail(error, where + "premise " + std::to_string(id) + " is not an earlier step");
      premises.push_back(it->second);
    }
    if (!free_vars(step.formula).empty()) return fail(error, where + "formula is not closed");

    switch (step.rule) {
      case Rule::Axiom: {
        if (!premises.empty()) return fail(error, where + "axiom takes no premises");
        bool found = std::any_of(t.sentences.begin(), t.sentences.end(),
                                 [&](const Formula& s) { return alpha_equivalent(s, step.formula); });
        if (!found) return fail(error, where + "not a sentence of the theory");
        break;
      }
      case Rule::Skolem: {
        if (premises.size() != 1) return fail(error, where + "skolem takes one premise");
        int counter = 0;
        std::function<std::string()> placeholder = [&]() { return "?" + std::to_string(counter++); };
        nf::SkolemForm expected = nf::skolemize(premises[0]->formula, placeholder);
        SymbolMatcher matcher;
        if (!matcher.formula(expected.sentence(), step.formula)) {
          return fail(error, where + "not the Skolem form of the premise");
        }
        for (const auto& [placeholder_name, actual] : matcher.symbols) {
          if (used_names.contains(actual)) return fail(error, where + "Skolem symbol " + actual + " is not fresh");
        }
        break;
      }
      case Rule::Clausify: {
        if (premises.size() != 1) return fail(error, where + "clausify takes one premise");
        std::vector<std::string> premise_vars, vars;
        Formula matrix = nf::strip_universals(premises[0]->formula, &premise_vars);
        Formula clause = nf::strip_universals(step.formula, &vars);
        if (!quantifier_free(matrix)) return fail(error, where + "premise is not universal");
        nf::Clause lits;
        if (!nf::clause_literals(clause, lits)) return fail(error, where + "conclusion is not a clause");
        for (const auto& v : vars) {
          if (std::find(premise_vars.begin(), premise_vars.end(), v) == premise_vars.end()) {
            return fail(error, where + "variable " + v + " is not bound by the premise");
          }
        }
        if (!Entailment()(matrix, lits)) return fail(error, where + "clause does not follow from the premise");
        break;
      }
      case Rule::Inst: {
        if (premises.size() != 1) return fail(error, where + "inst takes one premise");
        std::vector<std::string> vars;
        Formula pattern = nf::strip_universals(premises[0]->formula, &vars);
        if (!quantifier_free(pattern)) return fail(error, where + "premise is not a universal clause");
        if (!ground(step.formula)) return fail(error, where + "instance is not ground");
        InstanceMatcher matcher(vars);
        if (!matcher.formula(pattern, step.formula)) return fail(error, where + "not an instance of the premise");
        break;
      }
      case Rule::Resolve: {
        if (premises.size() != 2) return fail(error, where + "resolve takes two premises");
        nf::Clause a, b, r;
        if (!ground(premises[0]->formula) || !ground(premises[1]->formula) ||
            !nf::clause_literals(premises[0]->formula, a) || !nf::clause_literals(premises[1]->formula, b) ||
            !nf::clause_literals(step.formula, r)) {
          return fail(error, where + "resolution needs ground clauses");
        }
        auto ka = literal_keys(a), kb = literal_keys(b), kr = literal_keys(r);
        bool ok = false;
        for (const auto& lit : a) {
          bool negated = lit.kind() == FormulaKind::Not;
          std::string pos = print(negated ? lit.child() : lit);
          std::string neg = print(Formula::negation(negated ? lit.child() : lit));
          std::string mine = negated ? neg : pos, theirs = negated ? pos : neg;
          if (!kb.contains(theirs)) continue;
          std::set<std::string> expected;
          for (const auto& k : ka) {
            if (k != mine) expected.insert(k);
          }
          for (const auto& k : kb) {
            if (k != theirs) expected.insert(k);
          }
          if (expected == kr) {
            ok = true;
            break;
          }
        }
        if (!ok) return fail(error, where + "not a resolvent of its premises");
        break;
      }
    }
    VarSet n = all_names(step.formula);
    used_names.insert(n.begin(), n.end());
    seen.emplace(step.id, &step);
  }
  if (p.steps.back().formula.kind() != FormulaKind::Falsum) return fail(error, "last step does not derive Falsum");
  return true;
}

}  // namespace patholab::refuter
