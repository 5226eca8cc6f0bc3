// Reference implementations used as test oracles. They share only the AST
// with the library and deliberately use the most direct algorithm.

#ifndef PATHOLAB_TESTS_ORACLES_HPP
#define PATHOLAB_TESTS_ORACLES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab::oracle {

// ---------------------------------------------------------------------------
// Stratification by exhaustive level search.

struct LevelSystem {
  int nodes = 0;
  struct Edge {
    int lower, upper, offset;
  };
  std::vector<Edge> edges;
};

class LevelExtractor {
 public:
  LevelSystem run(const Formula& f) {
    std::map<std::string, int> env;
    formula(f, env);
    return sys_;
  }

 private:
  int fresh() { return sys_.nodes++; }

  int term(const Term& t, std::map<std::string, int>& env) {
    switch (t.kind()) {
      case TermKind::Variable: {
        auto it = env.find(t.name());
        if (it != env.end()) return it->second;
        auto f = free_.find(t.name());
        if (f != free_.end()) return f->second;
        return free_[t.name()] = fresh();
      }
      case TermKind::SetAbs: {
        int bound = fresh();
        int self = fresh();
        sys_.edges.push_back({bound, self, 1});
        auto inner = env;
        inner[t.name()] = bound;
        formula(t.body(), inner);
        return self;
      }
      default:
        for (const auto& a : t.args()) term(a, env);
        return fresh();
    }
  }

  void formula(const Formula& f, std::map<std::string, int>& env) {
    switch (f.kind()) {
      case FormulaKind::Membership:
      case FormulaKind::Equality: {
        int a = term(f.lhs_term(), env);
        int b = term(f.rhs_term(), env);
        sys_.edges.push_back({a, b, f.kind() == FormulaKind::Membership ? 1 : 0});
        return;
      }
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        return;
      case FormulaKind::Not:
        formula(f.child(), env);
        return;
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        auto inner = env;
        inner[f.var()] = fresh();
        formula(f.body(), inner);
        return;
      }
      default:
        formula(f.left(), env);
        formula(f.right(), env);
    }
  }

  LevelSystem sys_;
  std::map<std::string, int> free_;
};

// Tries every assignment of levels in [0, max_level].
inline bool brute_force_stratifiable(const LevelSystem& sys, int max_level = 8) {
  std::vector<int> level(sys.nodes, 0);
  while (true) {
    bool ok = true;
    for (const auto& e : sys.edges) {
      if (level[e.upper] != level[e.lower] + e.offset) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    int k = 0;
    while (k < sys.nodes && ++level[k] > max_level) level[k++] = 0;
    if (k == sys.nodes) return false;
  }
}

// ---------------------------------------------------------------------------
// Finite models by enumerating every membership matrix.

struct OracleModel {
  int size;
  std::vector<std::vector<bool>> member;  // member[i][j]: i in j
  int den;                                // element denoted by {x : A}
};

class ModelOracle {
 public:
  explicit ModelOracle(const Formula& a) : abstraction_(Term::set_abs("x", a)) { collect(abstraction_); }

  // The first model in enumeration order: sizes ascending; within a size,
  // cells read column by column with a present edge before an absent one.
  std::optional<OracleModel> first_model(int max_size) {
    for (int n = 1; n <= max_size; ++n) {
      n_ = n;
      int cells = n * n;
      for (unsigned long long k = 0; k < (1ULL << cells); ++k) {
        m_.assign(n, std::vector<bool>(n, false));
        for (int p = 0; p < cells; ++p) {
          bool absent = (k >> (cells - 1 - p)) & 1ULL;
          m_[p % n][p / n] = !absent;
        }
        if (!extensional()) continue;
        if (!total()) continue;
        std::map<std::string, int> env;
        return OracleModel{n, m_, *denote(abstraction_, env)};
      }
    }
    return std::nullopt;
  }

 private:
  void collect(const Term& t) {
    if (t.kind() == TermKind::SetAbs) {
      abstractions_.push_back(t);
      collect(t.body());
    }
    for (const auto& a : t.args()) collect(a);
  }
  void collect(const Formula& f) {
    if (f.is_atom()) {
      collect(f.lhs_term());
      collect(f.rhs_term());
    } else if (f.kind() == FormulaKind::Not || f.is_quantifier()) {
      collect(f.child());
    } else if (f.is_binary()) {
      collect(f.left());
      collect(f.right());
    }
  }

  bool extensional() const {
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        bool same = true;
        for (int i = 0; i < n_; ++i) same = same && m_[i][a] == m_[i][b];
        if (same) return false;
      }
    }
    return true;
  }

  // Every abstraction, under every assignment of its parameters, must have
  // an extension that is the member set of some element.
  bool total() {
    for (const auto& t : abstractions_) {
      VarSet fv = free_vars(t);
      std::vector<std::string> params(fv.begin(), fv.end());
      std::vector<int> values(params.size(), 0);
      while (true) {
        std::map<std::string, int> env;
        for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = values[i];
        if (!denote(t, env)) return false;
        std::size_t k = 0;
        while (k < values.size() && ++values[k] == n_) values[k++] = 0;
        if (k == values.size()) break;
      }
    }
    return true;
  }

  std::optional<int> denote(const Term& t, std::map<std::string, int>& env) {
    if (t.kind() == TermKind::Variable) return env.at(t.name());
    if (t.kind() != TermKind::SetAbs) throw std::logic_error("oracle supports variables and abstractions only");
    std::vector<bool> ext(n_);
    auto saved = env.find(t.name()) == env.end() ? std::optional<int>() : env[t.name()];
    for (int i = 0; i < n_; ++i) {
      env[t.name()] = i;
      auto v = holds(t.body(), env);
      if (!v) return std::nullopt;
      ext[i] = *v;
    }
    if (saved) env[t.name()] = *saved; else env.erase(t.name());
    for (int j = 0; j < n_; ++j) {
      bool same = true;
      for (int i = 0; i < n_; ++i) same = same && m_[i][j] == ext[i];
      if (same) return j;
    }
    return std::nullopt;
  }

  std::optional<bool> holds(const Formula& f, std::map<std::string, int>& env) {
    switch (f.kind()) {
      case FormulaKind::Membership:
      case FormulaKind::Equality: {
        auto a = denote(f.lhs_term(), env), b = denote(f.rhs_term(), env);
        if (!a || !b) return std::nullopt;
        return f.kind() == FormulaKind::Membership ? static_cast<bool>(m_[*a][*b]) : *a == *b;
      }
      case FormulaKind::Verum: return true;
      case FormulaKind::Falsum: return false;
      case FormulaKind::Not: {
        auto v = holds(f.child(), env);
        if (!v) return std::nullopt;
        return !*v;
      }
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        auto saved = env.find(f.var()) == env.end() ? std::optional<int>() : env[f.var()];
        bool universal = f.kind() == FormulaKind::Forall;
        bool result = universal;
        for (int i = 0; i < n_; ++i) {
          env[f.var()] = i;
          auto v = holds(f.body(), env);
          if (!v) return std::nullopt;
          if (*v != universal) result = !universal;
        }
        if (saved) env[f.var()] = *saved; else env.erase(f.var());
        return result;
      }
      default: {
        auto a = holds(f.left(), env), b = holds(f.right(), env);
        if (!a || !b) return std::nullopt;
        switch (f.kind()) {
          case FormulaKind::And: return *a && *b;
          case FormulaKind::Or: return *a || *b;
          case FormulaKind::Implies: return !*a || *b;
          default: return *a == *b;
        }
      }
    }
  }

  Term abstraction_;
  std::vector<Term> abstractions_;
  int n_ = 0;
  std::vector<std::vector<bool>> m_;
};

}  // namespace patholab::oracle

#endif  // PATHOLAB_TESTS_ORACLES_HPP
