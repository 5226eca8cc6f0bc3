#include "patholab/syntpatho.hpp"

#include <algorithm>

namespace patholab::synt {

namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == FormulaKind::And) {
    flatten_and(f.left(), out);
    flatten_and(f.right(), out);
  } else {
    out.push_back(f);
  }
}

bool is_var(const Term& t, const std::string& name) { return t.is_variable() && t.name() == name; }

class ChainMatcher {
 public:
  explicit ChainMatcher(std::vector<std::string> bound) : bound_(std::move(bound)) {}

  // Matches a conjunction body against the chain, filling `match`.
  bool core(const Formula& body, NcnMatch& match) const {
    std::vector<Formula> parts;
    flatten_and(body, parts);
    std::vector<std::string> unused = bound_;
    std::string current = "x";
    match.chain_vars = {"x"};
    std::size_t i = 0;
    int k = 0;
    while (true) {
      if (i >= parts.size()) return false;
      const Formula& unit = parts[i++];
      Formula atom = unit;
      if (unit.kind() == FormulaKind::Or && unit.left().kind() == FormulaKind::Membership) {
        atom = unit.left();
        match.insertions.push_back({k, InsertionKind::OrB, unit.right()});
      }
      if (atom.kind() != FormulaKind::Membership || !is_var(atom.lhs_term(), current) ||
          !atom.rhs_term().is_variable()) {
        return false;
      }
      const std::string& next = atom.rhs_term().name();
      if (i < parts.size() && parts[i].kind() == FormulaKind::Not) {
        match.insertions.push_back({k, InsertionKind::AndNotB, parts[i].child()});
        ++i;
      }
      ++k;
      if (next == "x") break;
      auto it = std::find(unused.begin(), unused.end(), next);
      if (it == unused.end()) return false;
      unused.erase(it);
      match.chain_vars.push_back(next);
      current = next;
    }
    if (!unused.empty()) return false;
    match.n = k;
    if (i < parts.size() && parts[i].kind() == FormulaKind::Not) {
      match.insertions.push_back({k, InsertionKind::AndNotB, parts[i].child()});
      ++i;
    }
    return i == parts.size();
  }

 private:
  std::vector<std::string> bound_;
};

std::optional<NcnMatch> match_skeleton(const Formula& f) {
  if (f.kind() != FormulaKind::Not) return std::nullopt;
  Formula g = f.child();
  std::vector<std::string> bound;
  while (g.kind() == FormulaKind::Exists) {
    if (g.var() == "x" || std::find(bound.begin(), bound.end(), g.var()) != bound.end()) return std::nullopt;
    bound.push_back(g.var());
    g = g.body();
  }
  ChainMatcher matcher(bound);
  NcnMatch m;
  if (matcher.core(g, m)) return m;
  if (g.kind() == FormulaKind::Or) {
    NcnMatch with_tail;
    if (matcher.core(g.left(), with_tail)) {
      with_tail.insertions.push_back({with_tail.n, InsertionKind::OrB, g.right()});
      return with_tail;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<NcnMatch> match_ncn(const Formula& f) {
  auto m = match_skeleton(f);
  if (!m || !m->insertions.empty()) return std::nullopt;
  return m;
}

std::optional<NcnMatch> match_derivative(const Formula& f) {
  auto m = match_skeleton(f);
  if (!m || m->insertions.empty()) return std::nullopt;
  return m;
}

SyntVerdict synt_classify(const Formula& f) {
  for (const auto& sub : subformulas(f)) {
    if (sub.free.size() != 1) continue;
    NearlyClosed renamed = canonicalize(NearlyClosed{sub.formula, *sub.free.begin()});
    if (auto m = match_ncn(renamed.formula)) return SyntP{*m, renamed.formula};
    if (auto m = match_derivative(renamed.formula)) return SyntP{*m, renamed.formula};
  }
  return SyntHnP{};
}

bool is_syntp(const SyntVerdict& v) { return std::holds_alternative<SyntP>(v); }

Formula build_ncn(int n) {
  using namespace build;
  if (n <= 1) return neg(in("x", "x"));
  auto name = [](int i) { return i == 0 || i == -1 ? std::string("x") : "x" + std::to_string(i); };
  Formula body = in("x", "x1");
  for (int i = 1; i < n; ++i) {
    std::string to = i == n - 1 ? "x" : name(i + 1);
    body = conj(body, in(name(i), to));
  }
  for (int i = n - 1; i >= 1; --i) body = ex(name(i), body);
  return neg(body);
}

const char* insertion_kind_name(InsertionKind k) { return k == InsertionKind::AndNotB ? "AndNotB" : "OrB"; }

std::string describe(const NcnMatch& m) {
  std::string s = "NC_" + std::to_string(m.n);
  if (!m.insertions.empty()) {
    s += " derivative [";
    for (std::size_t i = 0; i < m.insertions.size(); ++i) {
      const auto& ins = m.insertions[i];
      if (i) s += "; ";
      s += std::string(insertion_kind_name(ins.kind)) + " at " +
           (ins.position == m.n ? std::string("body") : "atom " + std::to_string(ins.position)) + ": " +
           print(ins.inserted);
    }
    s += "]";
  }
  return s;
}

}  // namespace patholab::synt
