#include "patholab/normal_form.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace patholab::nf {

namespace {

Formula nnf_rec(const Formula& f, bool pos) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::Membership:
    case K::Equality:
      return pos ? f : Formula::negation(f);
    case K::Verum:
      return pos ? f : Formula::falsum();
    case K::Falsum:
      return pos ? f : Formula::verum();
    case K::Not:
      return nnf_rec(f.child(), !pos);
    case K::And:
      return pos ? Formula::conjunction(nnf_rec(f.left(), true), nnf_rec(f.right(), true))
                 : Formula::disjunction(nnf_rec(f.left(), false), nnf_rec(f.right(), false));
    case K::Or:
      return pos ? Formula::disjunction(nnf_rec(f.left(), true), nnf_rec(f.right(), true))
                 : Formula::conjunction(nnf_rec(f.left(), false), nnf_rec(f.right(), false));
    case K::Implies:
      return pos ? Formula::disjunction(nnf_rec(f.left(), false), nnf_rec(f.right(), true))
                 : Formula::conjunction(nnf_rec(f.left(), true), nnf_rec(f.right(), false));
    case K::Iff:
      // (l <-> r) = (not l | r) & (l | not r);  not (l <-> r) = (l | r) & (not l | not r)
      if (pos) {
        return Formula::conjunction(Formula::disjunction(nnf_rec(f.left(), false), nnf_rec(f.right(), true)),
                                    Formula::disjunction(nnf_rec(f.left(), true), nnf_rec(f.right(), false)));
      }
      return Formula::conjunction(Formula::disjunction(nnf_rec(f.left(), true), nnf_rec(f.right(), true)),
                                  Formula::disjunction(nnf_rec(f.left(), false), nnf_rec(f.right(), false)));
    case K::Forall:
      return Formula::quantifier(pos ? K::Forall : K::Exists, f.var(), nnf_rec(f.body(), pos));
    case K::Exists:
      return Formula::quantifier(pos ? K::Exists : K::Forall, f.var(), nnf_rec(f.body(), pos));
  }
  return f;
}

class Skolemizer {
 public:
  Skolemizer(const Formula& sentence, const std::function<std::string()>& next_symbol)
      : taken_(all_names(sentence)), next_symbol_(next_symbol) {}

  SkolemForm run(const Formula& f) {
    Env env;
    std::vector<std::string> scope;
    SkolemForm out;
    out.matrix = walk(f, env, scope);
    out.universals = std::move(universals_);
    out.skolem_symbols = std::move(symbols_);
    return out;
  }

 private:
  using Env = std::map<std::string, Term>;

  Term apply(const Term& t, const Env& env) {
    switch (t.kind()) {
      case TermKind::Variable: {
        auto it = env.find(t.name());
        return it == env.end() ? t : it->second;
      }
      case TermKind::Constant:
        return t;
      case TermKind::FnApp: {
        std::vector<Term> args;
        for (const auto& a : t.args()) args.push_back(apply(a, env));
        return Term::fn_app(t.name(), std::move(args));
      }
      case TermKind::SetAbs:
        break;
    }
    throw std::invalid_argument("skolemize: set abstraction in sentence");
  }

  Formula walk(const Formula& f, Env& env, std::vector<std::string>& scope) {
    using K = FormulaKind;
    switch (f.kind()) {
      case K::Membership:
        return Formula::membership(apply(f.lhs_term(), env), apply(f.rhs_term(), env));
      case K::Equality:
        return Formula::equality(apply(f.lhs_term(), env), apply(f.rhs_term(), env));
      case K::Verum:
      case K::Falsum:
        return f;
      case K::Not:
        return Formula::negation(walk(f.child(), env, scope));
      case K::And:
      case K::Or:
        return Formula::binary(f.kind(), walk(f.left(), env, scope), walk(f.right(), env, scope));
      case K::Forall: {
        std::string u;
        for (int k = static_cast<int>(universals_.size());; ++k) {
          u = "u" + std::to_string(k);
          if (!taken_.contains(u)) break;
        }
        taken_.insert(u);
        universals_.push_back(u);
        auto saved = env.find(f.var()) != env.end() ? std::optional<Term>(env.at(f.var())) : std::nullopt;
        env.insert_or_assign(f.var(), Term::variable(u));
        scope.push_back(u);
        Formula body = walk(f.body(), env, scope);
        scope.pop_back();
        restore(env, f.var(), saved);
        return body;
      }
      case K::Exists: {
        // Arguments: universals in scope that the existential's body depends on.
        VarSet depends;
        for (const auto& v : free_vars(f)) {
          auto it = env.find(v);
          if (it != env.end()) {
            VarSet fv = free_vars(it->second);
            depends.insert(fv.begin(), fv.end());
          }
        }
        std::vector<Term> args;
        for (const auto& u : scope) {
          if (depends.contains(u)) args.push_back(Term::variable(u));
        }
        std::string sym = next_symbol_();
        taken_.insert(sym);
        symbols_.emplace_back(sym, args.size());
        Term witness = args.empty() ? Term::constant(sym) : Term::fn_app(sym, std::move(args));
        auto saved = env.find(f.var()) != env.end() ? std::optional<Term>(env.at(f.var())) : std::nullopt;
        env.insert_or_assign(f.var(), witness);
        Formula body = walk(f.body(), env, scope);
        restore(env, f.var(), saved);
        return body;
      }
      default:
        throw std::invalid_argument("skolemize: formula not in negation normal form");
    }
  }

  static void restore(Env& env, const std::string& v, const std::optional<Term>& saved) {
    if (saved) {
      env.insert_or_assign(v, *saved);
    } else {
      env.erase(v);
    }
  }

  VarSet taken_;
  const std::function<std::string()>& next_symbol_;
  std::vector<std::string> universals_;
  std::vector<std::pair<std::string, std::size_t>> symbols_;
};

using Cnf = std::vector<Clause>;

bool is_negation_of(const Formula& a, const Formula& b) {
  return (a.kind() == FormulaKind::Not && a.child() == b) || (b.kind() == FormulaKind::Not && b.child() == a);
}

// Appends `lit` unless present; returns false if the clause becomes a tautology.
bool add_literal(Clause& c, const Formula& lit) {
  for (const auto& l : c) {
    if (l == lit) return true;
    if (is_negation_of(l, lit)) return false;
  }
  c.push_back(lit);
  return true;
}

bool cnf_rec(const Formula& f, Cnf& out, std::size_t limit) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::Verum:
      out.clear();
      return true;
    case K::Falsum:
      out = {Clause{}};
      return true;
    case K::And: {
      Cnf a, b;
      if (!cnf_rec(f.left(), a, limit) || !cnf_rec(f.right(), b, limit)) return false;
      out = std::move(a);
      out.insert(out.end(), b.begin(), b.end());
      return out.size() <= limit;
    }
    case K::Or: {
      Cnf a, b;
      if (!cnf_rec(f.left(), a, limit) || !cnf_rec(f.right(), b, limit)) return false;
      if (a.size() * b.size() > limit) return false;
      out.clear();
      for (const auto& ca : a) {
        for (const auto& cb : b) {
          Clause c = ca;
          bool keep = true;
          for (const auto& lit : cb) {
            if (!add_literal(c, lit)) {
              keep = false;
              break;
            }
          }
          if (keep) out.push_back(std::move(c));
        }
      }
      return true;
    }
    default:
      out = {Clause{f}};
      return true;
  }
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_rec(f, true); }

Formula SkolemForm::sentence() const {
  Formula f = matrix;
  for (auto it = universals.rbegin(); it != universals.rend(); ++it) f = Formula::forall(*it, f);
  return f;
}

SkolemForm skolemize(const Formula& sentence, const std::function<std::string()>& next_symbol) {
  Formula n = nnf(sentence);
  return Skolemizer(n, next_symbol).run(n);
}

bool clausify(const Formula& matrix, std::vector<Clause>& out, std::size_t limit) {
  Cnf cnf;
  if (!cnf_rec(matrix, cnf, limit)) return false;
  out.insert(out.end(), cnf.begin(), cnf.end());
  return true;
}

Formula clause_formula(const Clause& c) {
  if (c.empty()) return Formula::falsum();
  Formula f = c.front();
  for (std::size_t i = 1; i < c.size(); ++i) f = Formula::disjunction(f, c[i]);
  return f;
}

bool clause_literals(const Formula& f, Clause& out) {
  switch (f.kind()) {
    case FormulaKind::Falsum:
      return true;
    case FormulaKind::Or:
      return clause_literals(f.left(), out) && clause_literals(f.right(), out);
    case FormulaKind::Membership:
    case FormulaKind::Equality:
      out.push_back(f);
      return true;
    case FormulaKind::Not:
      if (!f.child().is_atom()) return false;
      out.push_back(f);
      return true;
    default:
      return false;
  }
}

Formula strip_universals(const Formula& f, std::vector<std::string>* vars) {
  Formula g = f;
  while (g.kind() == FormulaKind::Forall) {
    if (vars) vars->push_back(g.var());
    g = g.body();
  }
  return g;
}

}  // namespace patholab::nf
