#include "patholab/formula.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace patholab {

// ---------------------------------------------------------------------------
// Construction and access

Term Term::variable(std::string name) {
  return Term(std::make_shared<const TermNode>(TermNode{TermKind::Variable, std::move(name), {}, {}}));
}

Term Term::constant(std::string name) {
  return Term(std::make_shared<const TermNode>(TermNode{TermKind::Constant, std::move(name), {}, {}}));
}

Term Term::set_abs(std::string bound_var, Formula body) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::SetAbs, std::move(bound_var), {}, std::move(body)}));
}

Term Term::fn_app(std::string symbol, std::vector<Term> args) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::FnApp, std::move(symbol), std::move(args), {}}));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }
const Formula& Term::body() const { return node_->body; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  switch (a.kind()) {
    case TermKind::Variable:
    case TermKind::Constant:
      return true;
    case TermKind::SetAbs:
      return a.body() == b.body();
    case TermKind::FnApp:
      return a.args() == b.args();
  }
  return false;
}

Formula Formula::membership(Term lhs, Term rhs) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{FormulaKind::Membership, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::equality(Term lhs, Term rhs) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{FormulaKind::Equality, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::verum() {
  static const Formula v(std::make_shared<const FormulaNode>(FormulaNode{FormulaKind::Verum, {}, {}, {}, {}}));
  return v;
}

Formula Formula::falsum() {
  static const Formula v(std::make_shared<const FormulaNode>(FormulaNode{FormulaKind::Falsum, {}, {}, {}, {}}));
  return v;
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{FormulaKind::Not, {}, {}, std::move(f), {}}));
}

Formula Formula::binary(FormulaKind kind, Formula lhs, Formula rhs) {
  assert(kind == FormulaKind::And || kind == FormulaKind::Or || kind == FormulaKind::Implies ||
         kind == FormulaKind::Iff);
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{kind, {}, {}, std::move(lhs), std::move(rhs)}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) { return binary(FormulaKind::And, std::move(lhs), std::move(rhs)); }
Formula Formula::disjunction(Formula lhs, Formula rhs) { return binary(FormulaKind::Or, std::move(lhs), std::move(rhs)); }
Formula Formula::implication(Formula lhs, Formula rhs) { return binary(FormulaKind::Implies, std::move(lhs), std::move(rhs)); }
Formula Formula::biconditional(Formula lhs, Formula rhs) { return binary(FormulaKind::Iff, std::move(lhs), std::move(rhs)); }

Formula Formula::quantifier(FormulaKind kind, std::string var, Formula body) {
  assert(kind == FormulaKind::Forall || kind == FormulaKind::Exists);
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{kind, std::move(var), {}, std::move(body), {}}));
}

Formula Formula::forall(std::string var, Formula body) { return quantifier(FormulaKind::Forall, std::move(var), std::move(body)); }
Formula Formula::exists(std::string var, Formula body) { return quantifier(FormulaKind::Exists, std::move(var), std::move(body)); }

FormulaKind Formula::kind() const { return node_->kind; }
const Term& Formula::lhs_term() const { return node_->terms[0]; }
const Term& Formula::rhs_term() const { return node_->terms[1]; }
const Formula& Formula::child() const { return node_->lhs; }
const Formula& Formula::left() const { return node_->lhs; }
const Formula& Formula::right() const { return node_->rhs; }
const std::string& Formula::var() const { return node_->var; }
const Formula& Formula::body() const { return node_->lhs; }

bool Formula::is_atom() const {
  return kind() == FormulaKind::Membership || kind() == FormulaKind::Equality;
}

bool Formula::is_binary() const {
  auto k = kind();
  return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies || k == FormulaKind::Iff;
}

bool Formula::is_quantifier() const {
  return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Membership:
    case FormulaKind::Equality:
      return a.lhs_term() == b.lhs_term() && a.rhs_term() == b.rhs_term();
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return true;
    case FormulaKind::Not:
      return a.child() == b.child();
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return a.var() == b.var() && a.body() == b.body();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Free variables and names

namespace {

void free_vars_rec(const Formula& f, VarSet& bound, VarSet& out);

void free_vars_rec(const Term& t, VarSet& bound, VarSet& out) {
  switch (t.kind()) {
    case TermKind::Variable:
      if (!bound.contains(t.name())) out.insert(t.name());
      break;
    case TermKind::Constant:
      break;
    case TermKind::SetAbs: {
      bool inserted = bound.insert(t.name()).second;
      free_vars_rec(t.body(), bound, out);
      if (inserted) bound.erase(t.name());
      break;
    }
    case TermKind::FnApp:
      for (const auto& a : t.args()) free_vars_rec(a, bound, out);
      break;
  }
}

void free_vars_rec(const Formula& f, VarSet& bound, VarSet& out) {
  switch (f.kind()) {
    case FormulaKind::Membership:
    case FormulaKind::Equality:
      free_vars_rec(f.lhs_term(), bound, out);
      free_vars_rec(f.rhs_term(), bound, out);
      break;
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      break;
    case FormulaKind::Not:
      free_vars_rec(f.child(), bound, out);
      break;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool inserted = bound.insert(f.var()).second;
      free_vars_rec(f.body(), bound, out);
      if (inserted) bound.erase(f.var());
      break;
    }
    default:
      free_vars_rec(f.left(), bound, out);
      free_vars_rec(f.right(), bound, out);
  }
}

void names_rec(const Formula& f, VarSet& out);

}  // namespace

void collect_names(const Term& t, VarSet& out) {
  out.insert(t.name());
  if (t.kind() == TermKind::SetAbs) names_rec(t.body(), out);
  for (const auto& a : t.args()) collect_names(a, out);
}

namespace {

void names_rec(const Formula& f, VarSet& out) {
  if (f.is_atom()) {
    collect_names(f.lhs_term(), out);
    collect_names(f.rhs_term(), out);
  } else if (f.kind() == FormulaKind::Not) {
    names_rec(f.child(), out);
  } else if (f.is_quantifier()) {
    out.insert(f.var());
    names_rec(f.body(), out);
  } else if (f.is_binary()) {
    names_rec(f.left(), out);
    names_rec(f.right(), out);
  }
}

}  // namespace

VarSet free_vars(const Formula& f) {
  VarSet bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

VarSet free_vars(const Term& t) {
  VarSet bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

VarSet all_names(const Formula& f) {
  VarSet out;
  names_rec(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const VarSet& taken) {
  if (!taken.contains(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken.contains(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

// Shared by quantifiers and SetAbs: returns the (possibly renamed) binder and body.
std::pair<std::string, Formula> substitute_under_binder(const std::string& binder, const Formula& body,
                                                        const std::string& v, const Term& replacement,
                                                        const VarSet& replacement_free) {
  if (!replacement_free.contains(binder) || !free_vars(body).contains(v)) {
    return {binder, substitute(body, v, replacement)};
  }
  VarSet taken = all_names(body);
  taken.insert(replacement_free.begin(), replacement_free.end());
  collect_names(replacement, taken);
  taken.insert(v);
  std::string renamed = fresh_name(binder, taken);
  Formula body2 = substitute(body, binder, Term::variable(renamed));
  return {renamed, substitute(body2, v, replacement)};
}

}  // namespace

Term substitute(const Term& t, const std::string& v, const Term& replacement) {
  switch (t.kind()) {
    case TermKind::Variable:
      return t.name() == v ? replacement : t;
    case TermKind::Constant:
      return t;
    case TermKind::SetAbs: {
      if (t.name() == v) return t;
      auto [binder, body] = substitute_under_binder(t.name(), t.body(), v, replacement, free_vars(replacement));
      return Term::set_abs(std::move(binder), std::move(body));
    }
    case TermKind::FnApp: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, v, replacement));
      return Term::fn_app(t.name(), std::move(args));
    }
  }
  return t;
}

Formula substitute(const Formula& f, const std::string& v, const Term& replacement) {
  switch (f.kind()) {
    case FormulaKind::Membership:
      return Formula::membership(substitute(f.lhs_term(), v, replacement), substitute(f.rhs_term(), v, replacement));
    case FormulaKind::Equality:
      return Formula::equality(substitute(f.lhs_term(), v, replacement), substitute(f.rhs_term(), v, replacement));
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return f;
    case FormulaKind::Not:
      return Formula::negation(substitute(f.child(), v, replacement));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      if (f.var() == v) return f;
      auto [binder, body] = substitute_under_binder(f.var(), f.body(), v, replacement, free_vars(replacement));
      return Formula::quantifier(f.kind(), std::move(binder), std::move(body));
    }
    default:
      return Formula::binary(f.kind(), substitute(f.left(), v, replacement), substitute(f.right(), v, replacement));
  }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

using Scope = std::vector<std::pair<std::string, std::string>>;

// Binder index of `name` counted from the innermost scope, or -1 when free.
int lookup(const Scope& scope, const std::string& name, bool left) {
  for (std::size_t i = scope.size(); i-- > 0;) {
    if ((left ? scope[i].first : scope[i].second) == name) return static_cast<int>(i);
  }
  return -1;
}

bool alpha_rec(const Formula& a, const Formula& b, Scope& scope);

bool alpha_rec(const Term& a, const Term& b, Scope& scope) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Variable: {
      int ia = lookup(scope, a.name(), true);
      int ib = lookup(scope, b.name(), false);
      if (ia != ib) return false;
      return ia >= 0 || a.name() == b.name();
    }
    case TermKind::Constant:
      return a.name() == b.name();
    case TermKind::SetAbs: {
      scope.emplace_back(a.name(), b.name());
      bool ok = alpha_rec(a.body(), b.body(), scope);
      scope.pop_back();
      return ok;
    }
    case TermKind::FnApp: {
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (!alpha_rec(a.args()[i], b.args()[i], scope)) return false;
      }
      return true;
    }
  }
  return false;
}

bool alpha_rec(const Formula& a, const Formula& b, Scope& scope) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Membership:
    case FormulaKind::Equality:
      return alpha_rec(a.lhs_term(), b.lhs_term(), scope) && alpha_rec(a.rhs_term(), b.rhs_term(), scope);
    case FormulaKind::Verum:
    case FormulaKind::Falsum:
      return true;
    case FormulaKind::Not:
      return alpha_rec(a.child(), b.child(), scope);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      scope.emplace_back(a.var(), b.var());
      bool ok = alpha_rec(a.body(), b.body(), scope);
      scope.pop_back();
      return ok;
    }
    default:
      return alpha_rec(a.left(), b.left(), scope) && alpha_rec(a.right(), b.right(), scope);
  }
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Scope scope;
  return alpha_rec(a, b, scope);
}

bool alpha_equivalent(const Term& a, const Term& b) {
  Scope scope;
  return alpha_rec(a, b, scope);
}

// ---------------------------------------------------------------------------
// Subformulas and structural measures

namespace {

void subformulas_rec(const Formula& f, std::vector<Subformula>& out);

void term_subformulas(const Term& t, std::vector<Subformula>& out) {
  if (t.kind() == TermKind::SetAbs) subformulas_rec(t.body(), out);
  for (const auto& a : t.args()) term_subformulas(a, out);
}

void subformulas_rec(const Formula& f, std::vector<Subformula>& out) {
  out.push_back({f, free_vars(f)});
  if (f.is_atom()) {
    term_subformulas(f.lhs_term(), out);
    term_subformulas(f.rhs_term(), out);
  } else if (f.kind() == FormulaKind::Not || f.is_quantifier()) {
    subformulas_rec(f.child(), out);
  } else if (f.is_binary()) {
    subformulas_rec(f.left(), out);
    subformulas_rec(f.right(), out);
  }
}

std::size_t term_node_count(const Term& t);

std::size_t count_rec(const Formula& f) {
  if (f.is_atom()) return 1 + term_node_count(f.lhs_term()) + term_node_count(f.rhs_term());
  if (f.kind() == FormulaKind::Not || f.is_quantifier()) return 1 + count_rec(f.child());
  if (f.is_binary()) return 1 + count_rec(f.left()) + count_rec(f.right());
  return 1;
}

std::size_t term_node_count(const Term& t) {
  std::size_t n = 0;
  if (t.kind() == TermKind::SetAbs) n += count_rec(t.body());
  for (const auto& a : t.args()) n += term_node_count(a);
  return n;
}

int term_qdepth(const Term& t);

int qdepth_rec(const Formula& f) {
  if (f.is_atom()) return std::max(term_qdepth(f.lhs_term()), term_qdepth(f.rhs_term()));
  if (f.kind() == FormulaKind::Not) return qdepth_rec(f.child());
  if (f.is_quantifier()) return 1 + qdepth_rec(f.body());
  if (f.is_binary()) return std::max(qdepth_rec(f.left()), qdepth_rec(f.right()));
  return 0;
}

int term_qdepth(const Term& t) {
  int d = 0;
  if (t.kind() == TermKind::SetAbs) d = 1 + qdepth_rec(t.body());
  for (const auto& a : t.args()) d = std::max(d, term_qdepth(a));
  return d;
}

template <typename Visit>
void visit_terms(const Formula& f, const Visit& visit);

template <typename Visit>
void visit_term(const Term& t, const Visit& visit) {
  visit(t);
  if (t.kind() == TermKind::SetAbs) visit_terms(t.body(), visit);
  for (const auto& a : t.args()) visit_term(a, visit);
}

template <typename Visit>
void visit_terms(const Formula& f, const Visit& visit) {
  if (f.is_atom()) {
    visit_term(f.lhs_term(), visit);
    visit_term(f.rhs_term(), visit);
  } else if (f.kind() == FormulaKind::Not || f.is_quantifier()) {
    visit_terms(f.child(), visit);
  } else if (f.is_binary()) {
    visit_terms(f.left(), visit);
    visit_terms(f.right(), visit);
  }
}

}  // namespace

std::vector<Subformula> subformulas(const Formula& f) {
  std::vector<Subformula> out;
  subformulas_rec(f, out);
  return out;
}

std::size_t formula_node_count(const Formula& f) { return count_rec(f); }

int quantifier_depth(const Formula& f) { return qdepth_rec(f); }

std::set<std::pair<std::string, std::size_t>> function_symbols(const Formula& f) {
  std::set<std::pair<std::string, std::size_t>> out;
  visit_terms(f, [&](const Term& t) {
    if (t.kind() == TermKind::FnApp) out.emplace(t.name(), t.args().size());
  });
  return out;
}

std::set<std::string> constants(const Formula& f) {
  std::set<std::string> out;
  visit_terms(f, [&](const Term& t) {
    if (t.kind() == TermKind::Constant) out.insert(t.name());
  });
  return out;
}

// ---------------------------------------------------------------------------
// Nearly-closed predicates

std::variant<NearlyClosed, Rejection> nearly_closed(const Formula& f) {
  VarSet fv = free_vars(f);
  if (fv.size() != 1) return Rejection{std::move(fv)};
  return NearlyClosed{f, *fv.begin()};
}

NearlyClosed canonicalize(const NearlyClosed& a) {
  if (a.var == "x") return a;
  return NearlyClosed{substitute(a.formula, a.var, Term::variable("x")), "x"};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string wrap(const Formula& f) {
  auto k = f.kind();
  if (k == FormulaKind::Verum || k == FormulaKind::Falsum) return print(f);
  return "(" + print(f) + ")";
}

// Operands of `not` and quantifier bodies stay bare when they are themselves
// prefix forms; anything else is parenthesized.
std::string wrap_prefix_operand(const Formula& f) {
  auto k = f.kind();
  if (k == FormulaKind::Verum || k == FormulaKind::Falsum || k == FormulaKind::Not || f.is_quantifier()) {
    return print(f);
  }
  return "(" + print(f) + ")";
}

const char* binary_op(FormulaKind k) {
  switch (k) {
    case FormulaKind::And: return " & ";
    case FormulaKind::Or: return " | ";
    case FormulaKind::Implies: return " -> ";
    case FormulaKind::Iff: return " <-> ";
    default: return " ? ";
  }
}

}  // namespace

std::string print(const Term& t) {
  switch (t.kind()) {
    case TermKind::Variable:
    case TermKind::Constant:
      return t.name();
    case TermKind::SetAbs:
      return "{" + t.name() + " : " + print(t.body()) + "}";
    case TermKind::FnApp: {
      std::string s = t.name() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ", ";
        s += print(t.args()[i]);
      }
      return s + ")";
    }
  }
  return {};
}

std::string print(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Membership:
      return print(f.lhs_term()) + " in " + print(f.rhs_term());
    case FormulaKind::Equality:
      return print(f.lhs_term()) + " = " + print(f.rhs_term());
    case FormulaKind::Verum:
      return "Verum";
    case FormulaKind::Falsum:
      return "Falsum";
    case FormulaKind::Not:
      return "not " + wrap_prefix_operand(f.child());
    case FormulaKind::Forall:
      return "forall " + f.var() + ": " + wrap_prefix_operand(f.body());
    case FormulaKind::Exists:
      return "exists " + f.var() + ": " + wrap_prefix_operand(f.body());
    default:
      return wrap(f.left()) + binary_op(f.kind()) + wrap(f.right());
  }
}

bool is_keyword(std::string_view s) {
  return s == "not" || s == "forall" || s == "exists" || s == "in" || s == "Verum" || s == "Falsum";
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s[0])) return false;
  for (char c : s) {
    if (!alpha(c) && !digit(c) && c != '_') return false;
  }
  return !is_keyword(s);
}

}  // namespace patholab
