#include <algorithm>

#include "patholab/refuter.hpp"

namespace patholab::refuter {

namespace {

// Replaces every set abstraction by its symbol, allocating symbols in
// pre-order and reusing one for alpha-equivalent abstractions.
class Eliminator {
 public:
  explicit Eliminator(Theory& t) : theory_(t) {}

  Term term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Variable:
        return t;
      case TermKind::Constant:
        theory_.constants.insert(t.name());
        return t;
      case TermKind::FnApp: {
        theory_.functions.emplace(t.name(), t.args().size());
        std::vector<Term> args;
        for (const auto& a : t.args()) args.push_back(term(a));
        return Term::fn_app(t.name(), std::move(args));
      }
      case TermKind::SetAbs:
        return abstraction(t);
    }
    return t;
  }

  Formula formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Membership:
        return Formula::membership(term(f.lhs_term()), term(f.rhs_term()));
      case FormulaKind::Equality:
        return Formula::equality(term(f.lhs_term()), term(f.rhs_term()));
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        return f;
      case FormulaKind::Not:
        return Formula::negation(formula(f.child()));
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        return Formula::quantifier(f.kind(), f.var(), formula(f.body()));
      default:
        return Formula::binary(f.kind(), formula(f.left()), formula(f.right()));
    }
  }

 private:
  static Term applied(const Abstraction& a) {
    if (a.params.empty()) return Term::constant(a.symbol);
    std::vector<Term> args;
    for (const auto& p : a.params) args.push_back(Term::variable(p));
    return Term::fn_app(a.symbol, std::move(args));
  }

  Term abstraction(const Term& t) {
    VarSet fv = free_vars(t);
    std::vector<std::string> params(fv.begin(), fv.end());
    for (const auto& a : theory_.abstractions) {
      if (a.params == params && alpha_equivalent(a.original, t)) return applied(a);
    }
    std::size_t index = theory_.abstractions.size();
    Abstraction a;
    a.symbol = "c" + std::to_string(index);
    a.params = params;
    a.original = t;
    theory_.abstractions.push_back(a);

    Formula body = formula(t.body());
    std::string y = "y";
    if (t.name() != "y") {
      VarSet taken = all_names(body);
      taken.insert(params.begin(), params.end());
      y = fresh_name("y", taken);
    }
    auto& stored = theory_.abstractions[index];
    stored.bound_var = y;
    stored.instance_body = substitute(body, t.name(), Term::variable(y));
    if (params.empty()) {
      theory_.constants.insert(stored.symbol);
    } else {
      theory_.functions.emplace(stored.symbol, params.size());
    }
    return applied(stored);
  }

  Theory& theory_;
};

Formula comprehension_instance(const Abstraction& a) {
  Term rep = a.params.empty() ? Term::constant(a.symbol) : [&] {
    std::vector<Term> args;
    for (const auto& p : a.params) args.push_back(Term::variable(p));
    return Term::fn_app(a.symbol, std::move(args));
  }();
  Formula f = Formula::forall(
      a.bound_var, Formula::biconditional(Formula::membership(Term::variable(a.bound_var), rep), a.instance_body));
  for (auto it = a.params.rbegin(); it != a.params.rend(); ++it) f = Formula::forall(*it, f);
  return f;
}

}  // namespace

Theory build_cosi_theory(const NearlyClosed& candidate) {
  using namespace build;
  NearlyClosed a = canonicalize(candidate);
  Theory t;
  Eliminator(t).term(Term::set_abs("x", a.formula));

  for (const auto& abs : t.abstractions) {
    t.sentences.push_back(comprehension_instance(abs));
    t.labels.push_back("comprehension " + abs.symbol);
  }

  auto add = [&](std::string label, Formula f) {
    t.labels.push_back(std::move(label));
    t.sentences.push_back(std::move(f));
  };
  add("extensionality", all("u", all("v", imp(all("z", iff(in("z", "u"), in("z", "v"))), eq("u", "v")))));
  add("equality reflexivity", all("u", eq("u", "u")));
  add("equality symmetry", all("u", all("v", imp(eq("u", "v"), eq("v", "u")))));
  add("equality transitivity",
      all("u", all("v", all("w", imp(conj(eq("u", "v"), eq("v", "w")), eq("u", "w"))))));
  add("membership substitutivity (element)",
      all("u", all("v", all("w", imp(conj(eq("u", "v"), in("u", "w")), in("v", "w"))))));
  add("membership substitutivity (set)",
      all("u", all("v", all("w", imp(conj(eq("u", "v"), in("w", "u")), in("w", "v"))))));

  for (const auto& [symbol, arity] : t.functions) {
    for (std::size_t pos = 0; pos < arity; ++pos) {
      std::vector<Term> lhs, rhs;
      std::vector<std::string> others;
      for (std::size_t i = 0; i < arity; ++i) {
        if (i == pos) {
          lhs.push_back(var("u"));
          rhs.push_back(var("v"));
        } else {
          std::string w = "w" + std::to_string(i);
          others.push_back(w);
          lhs.push_back(var(w));
          rhs.push_back(var(w));
        }
      }
      Formula f = imp(eq("u", "v"), eq(Term::fn_app(symbol, lhs), Term::fn_app(symbol, rhs)));
      for (auto it = others.rbegin(); it != others.rend(); ++it) f = all(*it, f);
      f = all("u", all("v", f));
      add("congruence " + symbol + " argument " + std::to_string(pos + 1), f);
    }
  }
  return t;
}

}  // namespace patholab::refuter
