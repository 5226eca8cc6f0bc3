#include "patholab/modelfinder.hpp"

#include <algorithm>
#include <sstream>

#include "cdcl.hpp"

namespace patholab::model {

int Model::extension_size(int j) const {
  int count = 0;
  for (int i = 0; i < size; ++i) count += membership[i][j] ? 1 : 0;
  return count;
}

// ---------------------------------------------------------------------------
// Plain evaluator

namespace {

std::string applied_key(const std::string& symbol, const std::vector<int>& args) {
  std::string key = symbol + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(args[i]);
  }
  return key + ")";
}

int element_with_extension(const Model& m, const std::vector<bool>& ext) {
  for (int j = 0; j < m.size; ++j) {
    bool same = true;
    for (int i = 0; i < m.size && same; ++i) same = m.membership[i][j] == ext[i];
    if (same) return j;
  }
  return -1;
}

}  // namespace

int eval_term(const Model& m, const Term& t, const Env& env) {
  switch (t.kind()) {
    case TermKind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw std::invalid_argument("unbound variable " + t.name());
      return it->second;
    }
    case TermKind::Constant: {
      auto it = m.denotations.find(t.name());
      if (it == m.denotations.end()) throw UnsupportedTerm("no denotation for constant " + t.name());
      return it->second;
    }
    case TermKind::FnApp: {
      std::vector<int> args;
      for (const auto& a : t.args()) args.push_back(eval_term(m, a, env));
      auto it = m.denotations.find(applied_key(t.name(), args));
      if (it == m.denotations.end()) throw UnsupportedTerm("uninterpreted function symbol " + t.name());
      return it->second;
    }
    case TermKind::SetAbs: {
      Env inner = env;
      std::vector<bool> ext(m.size);
      for (int i = 0; i < m.size; ++i) {
        inner[t.name()] = i;
        ext[i] = eval_formula(m, t.body(), inner);
      }
      int j = element_with_extension(m, ext);
      if (j < 0) throw UnsupportedTerm("extension of " + print(t) + " is not an element of the model");
      return j;
    }
  }
  return -1;
}

bool eval_formula(const Model& m, const Formula& f, const Env& env) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::Membership:
      return m.membership[eval_term(m, f.lhs_term(), env)][eval_term(m, f.rhs_term(), env)];
    case K::Equality:
      return eval_term(m, f.lhs_term(), env) == eval_term(m, f.rhs_term(), env);
    case K::Verum:
      return true;
    case K::Falsum:
      return false;
    case K::Not:
      return !eval_formula(m, f.child(), env);
    case K::And:
      return eval_formula(m, f.left(), env) && eval_formula(m, f.right(), env);
    case K::Or:
      return eval_formula(m, f.left(), env) || eval_formula(m, f.right(), env);
    case K::Implies:
      return !eval_formula(m, f.left(), env) || eval_formula(m, f.right(), env);
    case K::Iff:
      return eval_formula(m, f.left(), env) == eval_formula(m, f.right(), env);
    case K::Forall:
    case K::Exists: {
      Env inner = env;
      bool universal = f.kind() == K::Forall;
      for (int i = 0; i < m.size; ++i) {
        inner[f.var()] = i;
        if (eval_formula(m, f.body(), inner) != universal) return !universal;
      }
      return universal;
    }
  }
  return false;
}

bool satisfies_theory(const Model& m, const refuter::Theory& t, std::string* error) {
  for (int a = 0; a < m.size; ++a) {
    for (int b = a + 1; b < m.size; ++b) {
      bool same = true;
      for (int i = 0; i < m.size && same; ++i) same = m.membership[i][a] == m.membership[i][b];
      if (same) {
        if (error) *error = "elements " + std::to_string(a) + " and " + std::to_string(b) + " have the same members";
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < t.sentences.size(); ++i) {
    if (!eval_formula(m, t.sentences[i])) {
      if (error) *error = "sentence fails: " + t.labels[i];
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct CTerm {
  enum Kind { Var, Abs } kind;
  int index;  // variable slot, or abstraction index
  std::vector<CTerm> args;
};

struct CNode {
  FormulaKind kind;
  int slot = -1;
  std::vector<CTerm> terms;
  std::vector<CNode> children;
};

class Compiler {
 public:
  Compiler(const refuter::Theory& t) : theory_(t) {}

  CNode formula(const Formula& f) {
    CNode n;
    n.kind = f.kind();
    switch (f.kind()) {
      case FormulaKind::Membership:
      case FormulaKind::Equality:
        n.terms.push_back(term(f.lhs_term()));
        n.terms.push_back(term(f.rhs_term()));
        break;
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        break;
      case FormulaKind::Not:
        n.children.push_back(formula(f.child()));
        break;
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        n.slot = push(f.var());
        n.children.push_back(formula(f.body()));
        pop();
        break;
      default:
        n.children.push_back(formula(f.left()));
        n.children.push_back(formula(f.right()));
    }
    return n;
  }

  int push(const std::string& v) {
    int slot = static_cast<int>(scope_.size());
    scope_.push_back(v);
    slots_ = std::max(slots_, static_cast<int>(scope_.size()));
    return slot;
  }
  void pop() { scope_.pop_back(); }
  int slots() const { return slots_; }

 private:
  CTerm term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Variable:
        for (int i = static_cast<int>(scope_.size()); i-- > 0;) {
          if (scope_[i] == t.name()) return CTerm{CTerm::Var, i, {}};
        }
        throw std::logic_error("unbound variable " + t.name());
      case TermKind::Constant:
        return CTerm{CTerm::Abs, abstraction(t.name()), {}};
      case TermKind::FnApp: {
        CTerm c{CTerm::Abs, abstraction(t.name()), {}};
        for (const auto& a : t.args()) c.args.push_back(term(a));
        return c;
      }
      case TermKind::SetAbs:
        break;
    }
    throw std::logic_error("set abstraction left in theory");
  }

  int abstraction(const std::string& symbol) {
    for (std::size_t i = 0; i < theory_.abstractions.size(); ++i) {
      if (theory_.abstractions[i].symbol == symbol) return static_cast<int>(i);
    }
    throw UnsupportedTerm("uninterpreted symbol " + symbol);
  }

  const refuter::Theory& theory_;
  std::vector<std::string> scope_;
  int slots_ = 0;
};

struct CompiledAbs {
  int params;
  int bound_slot;  // == params
  int slots;
  CNode body;
};

// Grounds the theory over a universe of n elements into clauses. Atoms
// 0 .. n*n-1 are the membership cells in enumeration order; every
// abstraction gets a one-hot denotation vector per parameter tuple.
class Encoder {
 public:
  using Lit = sat::Lit;
  static constexpr int kTrue = -1;
  static constexpr int kFalse = -2;
  using Value = std::vector<int>;  // indicator of each element

  Encoder(const std::vector<CompiledAbs>& abs, int n) : abs_(abs), n_(n), next_atom_(n * n) {
    for (std::size_t c = 0; c < abs_.size(); ++c) {
      std::vector<int> args(abs_[c].params, 0);
      do {
        std::vector<int> atoms(n_);
        for (int e = 0; e < n_; ++e) atoms[e] = next_atom_++;
        den_.emplace(std::make_pair(static_cast<int>(c), args), atoms);
      } while (next_tuple(args));
    }
    for (auto& [key, atoms] : den_) {
      std::vector<Lit> at_least;
      for (int e = 0; e < n_; ++e) {
        at_least.push_back(sat::pos_lit(atoms[e]));
        for (int f = e + 1; f < n_; ++f) clauses_.push_back({sat::neg_lit(atoms[e]), sat::neg_lit(atoms[f])});
      }
      clauses_.push_back(at_least);
    }
    for (const auto& [key, atoms] : den_) comprehension(key.first, key.second, atoms);
    extensionality();
  }

  int cell_atom(int i, int j) const { return j * n_ + i; }
  int num_atoms() const { return next_atom_; }
  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }
  const std::map<std::pair<int, std::vector<int>>, std::vector<int>>& denotation_atoms() const { return den_; }

  bool next_tuple(std::vector<int>& t) const {
    for (std::size_t k = t.size(); k-- > 0;) {
      if (++t[k] < n_) return true;
      t[k] = 0;
    }
    return false;
  }

 private:
  static int negation(int v) {
    if (v == kTrue) return kFalse;
    if (v == kFalse) return kTrue;
    return sat::negate(v);
  }

  int conjunction(std::vector<int> xs) {
    std::vector<int> lits;
    for (int x : xs) {
      if (x == kFalse) return kFalse;
      if (x != kTrue) lits.push_back(x);
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
      if (lits[i + 1] == sat::negate(lits[i])) return kFalse;
    }
    if (lits.empty()) return kTrue;
    if (lits.size() == 1) return lits[0];
    auto it = and_cache_.find(lits);
    if (it != and_cache_.end()) return it->second;
    Lit a = sat::pos_lit(next_atom_++);
    std::vector<Lit> back{a};
    for (Lit l : lits) {
      clauses_.push_back({sat::negate(a), l});
      back.push_back(sat::negate(l));
    }
    clauses_.push_back(back);
    and_cache_.emplace(lits, a);
    return a;
  }

  int disjunction(std::vector<int> xs) {
    for (int& x : xs) x = negation(x);
    return negation(conjunction(std::move(xs)));
  }

  int equivalence(int a, int b) {
    if (a == kTrue) return b;
    if (b == kTrue) return a;
    if (a == kFalse) return negation(b);
    if (b == kFalse) return negation(a);
    if (a == b) return kTrue;
    if (a == sat::negate(b)) return kFalse;
    auto key = std::minmax(a, b);
    auto it = iff_cache_.find(key);
    if (it != iff_cache_.end()) return it->second;
    Lit v = sat::pos_lit(next_atom_++);
    clauses_.push_back({sat::negate(v), sat::negate(a), b});
    clauses_.push_back({sat::negate(v), a, sat::negate(b)});
    clauses_.push_back({v, a, b});
    clauses_.push_back({v, sat::negate(a), sat::negate(b)});
    iff_cache_.emplace(key, v);
    return v;
  }

  Value fixed(int e) const {
    Value v(n_, kFalse);
    v[e] = kTrue;
    return v;
  }

  Value term(const CTerm& t, std::vector<int>& env) {
    if (t.kind == CTerm::Var) return fixed(env[t.index]);
    std::vector<Value> args;
    for (const auto& a : t.args) args.push_back(term(a, env));
    Value result(n_, kFalse);
    std::vector<int> tuple(args.size(), 0);
    std::vector<std::vector<int>> cases(n_);
    do {
      std::vector<int> guard;
      for (std::size_t k = 0; k < args.size(); ++k) guard.push_back(args[k][tuple[k]]);
      int g = conjunction(guard);
      if (g == kFalse) continue;
      const auto& atoms = den_.at({t.index, tuple});
      for (int e = 0; e < n_; ++e) cases[e].push_back(conjunction({g, sat::pos_lit(atoms[e])}));
    } while (next_tuple(tuple));
    for (int e = 0; e < n_; ++e) result[e] = disjunction(cases[e]);
    return result;
  }

  int cell(int i, int j) const { return sat::pos_lit(cell_atom(i, j)); }

  int formula(const CNode& f, std::vector<int>& env) {
    using K = FormulaKind;
    switch (f.kind) {
      case K::Membership: {
        Value a = term(f.terms[0], env), b = term(f.terms[1], env);
        std::vector<int> cases;
        for (int i = 0; i < n_; ++i) {
          if (a[i] == kFalse) continue;
          for (int j = 0; j < n_; ++j) {
            if (b[j] != kFalse) cases.push_back(conjunction({a[i], b[j], cell(i, j)}));
          }
        }
        return disjunction(cases);
      }
      case K::Equality: {
        Value a = term(f.terms[0], env), b = term(f.terms[1], env);
        std::vector<int> cases;
        for (int i = 0; i < n_; ++i) cases.push_back(conjunction({a[i], b[i]}));
        return disjunction(cases);
      }
      case K::Verum:
        return kTrue;
      case K::Falsum:
        return kFalse;
      case K::Not:
        return negation(formula(f.children[0], env));
      case K::And:
        return conjunction({formula(f.children[0], env), formula(f.children[1], env)});
      case K::Or:
        return disjunction({formula(f.children[0], env), formula(f.children[1], env)});
      case K::Implies:
        return disjunction({negation(formula(f.children[0], env)), formula(f.children[1], env)});
      case K::Iff:
        return equivalence(formula(f.children[0], env), formula(f.children[1], env));
      case K::Forall:
      case K::Exists: {
        std::vector<int> parts;
        for (int i = 0; i < n_; ++i) {
          env[f.slot] = i;
          parts.push_back(formula(f.children[0], env));
        }
        env[f.slot] = -1;
        return f.kind == K::Forall ? conjunction(parts) : disjunction(parts);
      }
    }
    return kFalse;
  }

  void require(int v) {
    if (v == kTrue) return;
    if (v == kFalse) {
      clauses_.push_back({});
      return;
    }
    clauses_.push_back({v});
  }

  // forall y: (y in c(args) <-> body(args, y))
  void comprehension(int c, const std::vector<int>& args, const std::vector<int>& atoms) {
    const auto& a = abs_[c];
    std::vector<int> env(a.slots, -1);
    std::copy(args.begin(), args.end(), env.begin());
    for (int y = 0; y < n_; ++y) {
      env[a.bound_slot] = y;
      std::vector<int> member;
      for (int d = 0; d < n_; ++d) member.push_back(conjunction({sat::pos_lit(atoms[d]), cell(y, d)}));
      require(equivalence(disjunction(member), formula(a.body, env)));
    }
  }

  void extensionality() {
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        std::vector<int> differs;
        for (int i = 0; i < n_; ++i) differs.push_back(negation(equivalence(cell(i, a), cell(i, b))));
        require(disjunction(differs));
      }
    }
  }

  const std::vector<CompiledAbs>& abs_;
  int n_;
  int next_atom_;
  std::vector<std::vector<Lit>> clauses_;
  std::map<std::pair<int, std::vector<int>>, std::vector<int>> den_;
  std::map<std::vector<int>, int> and_cache_;
  std::map<std::pair<int, int>, int> iff_cache_;
};

constexpr long kConflictLimit = 1000000;

class Search {
 public:
  explicit Search(const refuter::Theory& t) : theory_(t) {
    for (const auto& a : t.abstractions) {
      Compiler c(t);
      for (const auto& p : a.params) c.push(p);
      int bound = c.push(a.bound_var);
      CNode body = c.formula(a.instance_body);
      abs_.push_back(CompiledAbs{static_cast<int>(a.params.size()), bound, c.slots(), std::move(body)});
    }
  }

  // The first model of size n in enumeration order, if any. Cells are fixed
  // one at a time, preferring a present edge whenever the theory allows it.
  std::optional<Model> run(int n) {
    Encoder enc(abs_, n);
    std::vector<sat::Lit> fixed;
    std::vector<bool> assignment;
    if (!solve(enc, fixed, assignment)) return std::nullopt;
    for (int pos = 0; pos < n * n; ++pos) {
      sat::Lit present = sat::pos_lit(pos);
      if (!assignment[pos]) {
        fixed.push_back(present);
        std::vector<bool> candidate;
        if (solve(enc, fixed, candidate)) {
          assignment = std::move(candidate);
          continue;
        }
        fixed.pop_back();
        fixed.push_back(sat::negate(present));
      }
      if (assignment[pos]) fixed.push_back(present);
    }
    Model m;
    m.size = n;
    m.membership.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m.membership[i][j] = assignment[enc.cell_atom(i, j)];
    }
    for (const auto& [key, atoms] : enc.denotation_atoms()) {
      const auto& symbol = theory_.abstractions[key.first].symbol;
      std::string name = abs_[key.first].params == 0 ? symbol : applied_key(symbol, key.second);
      for (int e = 0; e < n; ++e) {
        if (assignment[atoms[e]]) m.denotations[name] = e;
      }
    }
    return m;
  }

 private:
  static bool solve(const Encoder& enc, const std::vector<sat::Lit>& fixed, std::vector<bool>& assignment) {
    sat::Solver s(enc.num_atoms());
    for (const auto& c : enc.clauses()) s.add_clause(c);
    for (sat::Lit l : fixed) s.add_clause({l});
    if (s.solve(kConflictLimit) != sat::Solver::Result::Sat) return false;
    assignment.resize(enc.num_atoms());
    for (int a = 0; a < enc.num_atoms(); ++a) assignment[a] = s.model_value(a);
    return true;
  }

  const refuter::Theory& theory_;
  std::vector<CompiledAbs> abs_;
};

void reject_function_symbols(const refuter::Theory& t) {
  for (const auto& [symbol, arity] : t.functions) {
    bool abstraction = std::any_of(t.abstractions.begin(), t.abstractions.end(),
                                   [&](const refuter::Abstraction& a) { return a.symbol == symbol; });
    if (!abstraction) throw UnsupportedTerm("uninterpreted function symbol " + symbol);
  }
}

}  // namespace

FindResult find_model(const NearlyClosed& a, int max_size) {
  refuter::Theory t = refuter::build_cosi_theory(a);
  reject_function_symbols(t);
  Search search(t);
  for (int n = 1; n <= max_size; ++n) {
    if (auto m = search.run(n)) return *m;
  }
  return NotFound{max_size};
}

CertifyResult certify_nonpatho(const NearlyClosed& a, int max_size) {
  FindResult r = find_model(a, max_size);
  if (auto* m = std::get_if<Model>(&r)) {
    std::string error;
    if (!satisfies_theory(*m, refuter::build_cosi_theory(a), &error)) {
      throw std::logic_error("model search produced an invalid model: " + error);
    }
    return CertifiedNonPatho{std::move(*m)};
  }
  return Unknown{max_size};
}

const char* size_kind_name(SizeKind k) {
  switch (k) {
    case SizeKind::Slim: return "Slim";
    case SizeKind::Mighty: return "Mighty";
    case SizeKind::Balanced: return "Balanced";
  }
  return "?";
}

SizeClass size_class(const Model& m, const std::string& constant) {
  int j = m.denotations.at(constant);
  int members = m.extension_size(j);
  int complement = m.size - members;
  SizeKind k = members < complement ? SizeKind::Slim : members > complement ? SizeKind::Mighty : SizeKind::Balanced;
  return SizeClass{k, members, complement};
}

std::string serialize_model(const Model& m) {
  std::ostringstream out;
  out << "size " << m.size << "\n";
  for (int i = 0; i < m.size; ++i) {
    for (int j = 0; j < m.size; ++j) out << (m.membership[i][j] ? '1' : '0');
    out << "\n";
  }
  for (const auto& [c, d] : m.denotations) out << "den " << c << " " << d << "\n";
  return out.str();
}

Model parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  Model m;
  if (!(in >> word >> m.size) || word != "size" || m.size < 1) throw std::invalid_argument("expected 'size n'");
  m.membership.assign(m.size, std::vector<bool>(m.size, false));
  for (int i = 0; i < m.size; ++i) {
    std::string row;
    if (!(in >> row) || static_cast<int>(row.size()) != m.size ||
        row.find_first_not_of("01") != std::string::npos) {
      throw std::invalid_argument("bad adjacency row " + std::to_string(i));
    }
    for (int j = 0; j < m.size; ++j) m.membership[i][j] = row[j] == '1';
  }
  while (in >> word) {
    std::string c;
    int d;
    if (word != "den" || !(in >> c >> d) || d < 0 || d >= m.size) throw std::invalid_argument("bad denotation line");
    m.denotations[c] = d;
  }
  return m;
}

}  // namespace patholab::model
