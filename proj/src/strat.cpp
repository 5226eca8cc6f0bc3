#include "patholab/strat.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace patholab::strat {

namespace {

class Extractor {
 public:
  ConstraintSystem run(const Formula& f) {
    for (const auto& v : free_vars(f)) used_.insert(v);
    formula(f);
    return std::move(sys_);
  }

 private:
  std::string node(const std::string& name) {
    if (!known_.contains(name)) {
      known_.insert(name);
      sys_.nodes.push_back(name);
    }
    return name;
  }

  std::string variable(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return node(it->second);
    }
    return node(name);
  }

  std::string open_binder(const std::string& name) {
    std::string unique = name;
    for (int k = 2; used_.contains(unique); ++k) unique = name + "#" + std::to_string(k);
    used_.insert(unique);
    scope_.emplace_back(name, unique);
    return node(unique);
  }

  void close_binder() { scope_.pop_back(); }

  std::string term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Variable:
        return variable(t.name());
      case TermKind::Constant:
        return node(t.name() + "@" + std::to_string(occurrence_++));
      case TermKind::FnApp: {
        std::string id = node(print(t) + "@" + std::to_string(occurrence_++));
        for (const auto& a : t.args()) term(a);
        return id;
      }
      case TermKind::SetAbs: {
        std::string id = node(print(t) + "@" + std::to_string(occurrence_++));
        std::string bound = open_binder(t.name());
        sys_.constraints.push_back({bound, id, 1, print(t)});
        formula(t.body());
        close_binder();
        return id;
      }
    }
    return {};
  }

  void formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Membership: {
        std::string a = term(f.lhs_term());
        std::string b = term(f.rhs_term());
        sys_.constraints.push_back({a, b, 1, print(f)});
        break;
      }
      case FormulaKind::Equality: {
        std::string a = term(f.lhs_term());
        std::string b = term(f.rhs_term());
        sys_.constraints.push_back({a, b, 0, print(f)});
        break;
      }
      case FormulaKind::Verum:
      case FormulaKind::Falsum:
        break;
      case FormulaKind::Not:
        formula(f.child());
        break;
      case FormulaKind::Forall:
      case FormulaKind::Exists:
        open_binder(f.var());
        formula(f.body());
        close_binder();
        break;
      default:
        formula(f.left());
        formula(f.right());
    }
  }

  ConstraintSystem sys_;
  VarSet known_;
  VarSet used_;
  std::vector<std::pair<std::string, std::string>> scope_;
  int occurrence_ = 0;
};

// Union-find where potential[i] = level(i) - level(root(i)).
class OffsetUnionFind {
 public:
  explicit OffsetUnionFind(std::size_t n) : parent_(n), potential_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t i) {
    if (parent_[i] == i) return i;
    std::size_t root = find(parent_[i]);
    potential_[i] += potential_[parent_[i]];
    parent_[i] = root;
    return root;
  }

  int potential(std::size_t i) {
    find(i);
    return potential_[i];
  }

  // Imposes level(b) = level(a) + off; returns false on an inconsistency.
  bool unite(std::size_t a, std::size_t b, int off) {
    std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return potential_[b] - potential_[a] == off;
    // level(rb) = level(b) - pot(b) = level(a) + off - pot(b) = level(ra) + pot(a) + off - pot(b)
    parent_[rb] = ra;
    potential_[rb] = potential_[a] + off - potential_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> potential_;
};

struct Edge {
  std::size_t to;
  int delta;
};

// Path from `from` to `to` through the accepted constraints, as cycle steps.
std::vector<CycleStep> tree_path(const std::vector<std::vector<Edge>>& adj, const std::vector<std::string>& names,
                                 std::size_t from, std::size_t to) {
  std::vector<long> prev(adj.size(), -1);
  std::vector<int> prev_delta(adj.size(), 0);
  std::vector<bool> seen(adj.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (u == to) break;
    for (const auto& e : adj[u]) {
      if (seen[e.to]) continue;
      seen[e.to] = true;
      prev[e.to] = static_cast<long>(u);
      prev_delta[e.to] = e.delta;
      queue.push_back(e.to);
    }
  }
  std::vector<CycleStep> path;
  for (std::size_t v = to; v != from; v = static_cast<std::size_t>(prev[v])) {
    auto u = static_cast<std::size_t>(prev[v]);
    path.push_back({names[u], names[v], prev_delta[v]});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

int Unstratified::offset_sum() const {
  int s = 0;
  for (const auto& step : cycle) s += step.delta;
  return s;
}

ConstraintSystem level_constraints(const Formula& f) { return Extractor().run(f); }

StratResult stratify(const Formula& f) {
  ConstraintSystem sys = level_constraints(f);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) index[sys.nodes[i]] = i;

  OffsetUnionFind uf(sys.nodes.size());
  std::vector<std::vector<Edge>> adj(sys.nodes.size());
  for (const auto& c : sys.constraints) {
    std::size_t a = index.at(c.lower), b = index.at(c.upper);
    if (!uf.unite(a, b, c.offset)) {
      Unstratified u;
      u.cycle.push_back({c.lower, c.upper, c.offset});
      auto back = tree_path(adj, sys.nodes, b, a);
      u.cycle.insert(u.cycle.end(), back.begin(), back.end());
      return u;
    }
    if (a != b) {
      adj[a].push_back({b, c.offset});
      adj[b].push_back({a, -c.offset});
    }
  }

  std::unordered_map<std::size_t, int> component_min;
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) {
    std::size_t r = uf.find(i);
    int p = uf.potential(i);
    auto [it, fresh] = component_min.emplace(r, p);
    if (!fresh) it->second = std::min(it->second, p);
  }
  Stratified s;
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) {
    s.levels[sys.nodes[i]] = uf.potential(i) - component_min.at(uf.find(i));
  }
  return s;
}

bool is_stratified(const StratResult& r) { return std::holds_alternative<Stratified>(r); }

bool satisfies(const ConstraintSystem& sys, const std::map<std::string, int>& levels) {
  for (const auto& c : sys.constraints) {
    auto lo = levels.find(c.lower), hi = levels.find(c.upper);
    if (lo == levels.end() || hi == levels.end()) return false;
    if (hi->second != lo->second + c.offset) return false;
  }
  return true;
}

bool valid_conflict(const ConstraintSystem& sys, const Unstratified& u) {
  if (u.cycle.empty() || u.offset_sum() == 0) return false;
  for (std::size_t i = 0; i < u.cycle.size(); ++i) {
    const auto& step = u.cycle[i];
    const auto& next = u.cycle[(i + 1) % u.cycle.size()];
    if (step.to != next.from) return false;
    bool backed = std::any_of(sys.constraints.begin(), sys.constraints.end(), [&](const LevelConstraint& c) {
      return (c.lower == step.from && c.upper == step.to && c.offset == step.delta) ||
             (c.lower == step.to && c.upper == step.from && c.offset == -step.delta);
    });
    if (!backed) return false;
  }
  return true;
}

std::string describe(const StratResult& r) {
  if (const auto* s = std::get_if<Stratified>(&r)) {
    std::string out = "stratified:";
    for (const auto& [name, lvl] : s->levels) out += " " + name + "=" + std::to_string(lvl);
    return out;
  }
  const auto& u = std::get<Unstratified>(r);
  std::string out = "unstratified: ";
  for (const auto& step : u.cycle) {
    out += "level(" + step.to + ") = level(" + step.from + ")" + (step.delta >= 0 ? " + " : " - ") +
           std::to_string(std::abs(step.delta)) + "; ";
  }
  out += "cycle sum " + std::to_string(u.offset_sum());
  return out;
}

}  // namespace patholab::strat
