// Abstract syntax for PIF-logic formulas: membership and identity over terms
// built from variables, constants, set abstractions and function symbols.
//
// Terms and formulas are immutable handles around shared nodes. Copying a
// handle is cheap and never copies the tree, so subtrees are freely shared.

#ifndef PATHOLAB_FORMULA_HPP
#define PATHOLAB_FORMULA_HPP

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace patholab {

struct TermNode;
struct FormulaNode;
class Formula;

enum class TermKind { Variable, Constant, SetAbs, FnApp };

class Term {
 public:
  Term() = default;
  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term set_abs(std::string bound_var, Formula body);
  static Term fn_app(std::string symbol, std::vector<Term> args);

  TermKind kind() const;
  // Variable, constant or function symbol name; the bound variable of a SetAbs.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Formula& body() const;

  bool is_variable() const { return kind() == TermKind::Variable; }
  const TermNode* node() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

enum class FormulaKind {
  Membership,
  Equality,
  Verum,
  Falsum,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists
};

class Formula {
 public:
  // Default-constructed handles are empty and only used as placeholders.
  Formula() = default;

  static Formula membership(Term lhs, Term rhs);
  static Formula equality(Term lhs, Term rhs);
  static Formula verum();
  static Formula falsum();
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biconditional(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula binary(FormulaKind kind, Formula lhs, Formula rhs);
  static Formula quantifier(FormulaKind kind, std::string var, Formula body);

  bool empty() const { return node_ == nullptr; }
  FormulaKind kind() const;

  // Atoms.
  const Term& lhs_term() const;
  const Term& rhs_term() const;
  // Not: child(); binary connectives: left()/right(); quantifiers: var()/body().
  const Formula& child() const;
  const Formula& left() const;
  const Formula& right() const;
  const std::string& var() const;
  const Formula& body() const;

  bool is_atom() const;
  bool is_binary() const;
  bool is_quantifier() const;

  const FormulaNode* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  std::vector<Term> args;
  Formula body;
};

struct FormulaNode {
  FormulaKind kind;
  std::string var;
  std::vector<Term> terms;  // two entries for atoms
  Formula lhs;              // Not stores its operand here
  Formula rhs;
};

using VarSet = std::set<std::string>;

// Short builders, mostly for tests and programmatic construction.
namespace build {
inline Term var(std::string name) { return Term::variable(std::move(name)); }
inline Term cst(std::string name) { return Term::constant(std::move(name)); }
inline Term abs(std::string v, Formula body) { return Term::set_abs(std::move(v), std::move(body)); }
inline Formula in(Term a, Term b) { return Formula::membership(std::move(a), std::move(b)); }
inline Formula in(std::string a, std::string b) {
  return Formula::membership(Term::variable(std::move(a)), Term::variable(std::move(b)));
}
inline Formula eq(Term a, Term b) { return Formula::equality(std::move(a), std::move(b)); }
inline Formula eq(std::string a, std::string b) {
  return Formula::equality(Term::variable(std::move(a)), Term::variable(std::move(b)));
}
inline Formula neg(Formula f) { return Formula::negation(std::move(f)); }
inline Formula conj(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }
inline Formula imp(Formula a, Formula b) { return Formula::implication(std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return Formula::biconditional(std::move(a), std::move(b)); }
inline Formula all(std::string v, Formula b) { return Formula::forall(std::move(v), std::move(b)); }
inline Formula ex(std::string v, Formula b) { return Formula::exists(std::move(v), std::move(b)); }
}  // namespace build

// ---------------------------------------------------------------------------
// Structural utilities

VarSet free_vars(const Formula& f);
VarSet free_vars(const Term& t);

// Every identifier occurring anywhere (free, bound, symbol names).
VarSet all_names(const Formula& f);
void collect_names(const Term& t, VarSet& out);

// Capture-avoiding substitution of `replacement` for free occurrences of `v`.
Formula substitute(const Formula& f, const std::string& v, const Term& replacement);
Term substitute(const Term& t, const std::string& v, const Term& replacement);

// A name not in `taken`, derived from `base` as base_1, base_2, ...
std::string fresh_name(const std::string& base, const VarSet& taken);

bool alpha_equivalent(const Formula& a, const Formula& b);
bool alpha_equivalent(const Term& a, const Term& b);

struct Subformula {
  Formula formula;
  VarSet free;
};

// Pre-order listing of every formula-typed node, including SetAbs bodies.
std::vector<Subformula> subformulas(const Formula& f);

std::size_t formula_node_count(const Formula& f);

// Nesting depth of quantifiers (SetAbs binders included).
int quantifier_depth(const Formula& f);

// Function symbols (name, arity) appearing in FnApp terms.
std::set<std::pair<std::string, std::size_t>> function_symbols(const Formula& f);
std::set<std::string> constants(const Formula& f);

// ---------------------------------------------------------------------------
// Nearly-closed predicates

struct NearlyClosed {
  Formula formula;
  std::string var;
};

struct Rejection {
  VarSet free;
};

std::variant<NearlyClosed, Rejection> nearly_closed(const Formula& f);

// Renames the single free variable to `x`, renaming clashing binders.
NearlyClosed canonicalize(const NearlyClosed& a);

// ---------------------------------------------------------------------------
// Printing

std::string print(const Formula& f);
std::string print(const Term& t);

bool is_identifier(std::string_view s);
bool is_keyword(std::string_view s);

}  // namespace patholab

#endif  // PATHOLAB_FORMULA_HPP
