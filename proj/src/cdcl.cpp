#include "cdcl.hpp"

#include <algorithm>
#include <cassert>

namespace patholab::sat {

Solver::Solver(int num_atoms)
    : num_atoms_(num_atoms),
      watches_(2 * static_cast<std::size_t>(num_atoms)),
      assign_(num_atoms, -1),
      level_(num_atoms, 0),
      reason_(num_atoms, -1),
      trail_pos_(num_atoms, -1),
      activity_(num_atoms, 0.0) {}

int Solver::add_clause(std::vector<Lit> lits) {
  assert(chains_.empty() && "input clauses must precede solving");
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  int id = static_cast<int>(clauses_.size());
  clauses_.push_back(std::move(lits));
  ++num_input_;
  attach(id);
  return id;
}

void Solver::attach(int id) {
  const auto& c = clauses_[id];
  if (c.empty()) {
    if (empty_clause_ < 0) empty_clause_ = id;
  } else if (c.size() == 1) {
    units_.push_back(id);
  } else {
    watches_[c[0]].push_back(id);
    watches_[c[1]].push_back(id);
  }
}

int8_t Solver::value(Lit l) const {
  int8_t a = assign_[atom_of(l)];
  if (a < 0) return -1;
  return (l & 1) ? static_cast<int8_t>(1 - a) : a;
}

void Solver::enqueue(Lit l, int reason) {
  int a = atom_of(l);
  assign_[a] = (l & 1) ? 0 : 1;
  level_[a] = static_cast<int>(level_start_.size());
  reason_[a] = reason;
  trail_pos_[a] = static_cast<int>(trail_.size());
  trail_.push_back(l);
  order_.erase({-activity_[a], a});
}

// Watches are indexed by literal: a clause sits in watches_[l] for its two
// first literals l, and is visited when l becomes false.
int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit falsified = negate(trail_[qhead_++]);
    auto& ws = watches_[falsified];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      int cid = ws[i];
      auto& c = clauses_[cid];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ws[keep++] = cid;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(cid);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = cid;
      if (value(c[0]) == 0) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        return cid;
      }
      enqueue(c[0], cid);
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::backtrack(int level) {
  if (static_cast<int>(level_start_.size()) <= level) return;
  std::size_t target = level_start_[level];
  for (std::size_t i = trail_.size(); i-- > target;) {
    int a = atom_of(trail_[i]);
    assign_[a] = -1;
    reason_[a] = -1;
    trail_pos_[a] = -1;
    order_.insert({-activity_[a], a});
  }
  trail_.resize(target);
  level_start_.resize(level);
  qhead_ = target;
}

void Solver::bump(int atom) {
  bool queued = assign_[atom] < 0;
  if (queued) order_.erase({-activity_[atom], atom});
  activity_[atom] += bump_;
  if (queued) order_.insert({-activity_[atom], atom});
  if (activity_[atom] > 1e100) {
    order_.clear();
    for (int a = 0; a < num_atoms_; ++a) {
      activity_[a] *= 1e-100;
      if (assign_[a] < 0) order_.insert({-activity_[a], a});
    }
    bump_ *= 1e-100;
  }
}

int Solver::add_derived(std::vector<Lit> lits, Chain chain) {
  int id = static_cast<int>(clauses_.size());
  clauses_.push_back(std::move(lits));
  chains_.push_back(std::move(chain));
  return id;
}

// First-UIP analysis. Literals fixed at level 0 are kept, so the learned
// clause is exactly the resolvent of the recorded chain.
int Solver::learn_from(int conflict) {
  int current = static_cast<int>(level_start_.size());
  std::vector<char> seen(num_atoms_, 0);
  std::vector<Lit> learned;
  Chain chain;
  chain.start = conflict;
  int pending = 0;
  auto absorb = [&](int cid, int skip_atom) {
    for (Lit q : clauses_[cid]) {
      int a = atom_of(q);
      if (a == skip_atom || seen[a]) continue;
      seen[a] = 1;
      bump(a);
      if (level_[a] == current) {
        ++pending;
      } else {
        learned.push_back(q);
      }
    }
  };
  absorb(conflict, -1);
  std::size_t idx = trail_.size();
  Lit uip = -1;
  while (true) {
    do {
      --idx;
    } while (!seen[atom_of(trail_[idx])]);
    int a = atom_of(trail_[idx]);
    --pending;
    if (pending == 0) {
      uip = negate(trail_[idx]);
      break;
    }
    chain.steps.emplace_back(reason_[a], a);
    absorb(reason_[a], a);
  }
  learned.insert(learned.begin(), uip);
  int back_level = 0;
  std::size_t second = 0;
  for (std::size_t i = 1; i < learned.size(); ++i) {
    int lvl = level_[atom_of(learned[i])];
    if (lvl > back_level) {
      back_level = lvl;
      second = i;
    }
  }
  if (second) std::swap(learned[1], learned[second]);
  bump_ /= 0.95;
  int id = add_derived(std::move(learned), std::move(chain));
  backtrack(back_level);
  const auto& c = clauses_[id];
  if (c.size() >= 2) {
    watches_[c[0]].push_back(id);
    watches_[c[1]].push_back(id);
  }
  enqueue(c[0], id);
  return id;
}

void Solver::derive_empty(int conflict) {
  std::vector<char> seen(num_atoms_, 0);
  for (Lit q : clauses_[conflict]) seen[atom_of(q)] = 1;
  Chain chain;
  chain.start = conflict;
  for (std::size_t i = trail_.size(); i-- > 0;) {
    int a = atom_of(trail_[i]);
    if (!seen[a]) continue;
    chain.steps.emplace_back(reason_[a], a);
    for (Lit q : clauses_[reason_[a]]) seen[atom_of(q)] = 1;
  }
  empty_clause_ = add_derived({}, std::move(chain));
}

int Solver::pick_branch_atom() {
  if (order_.empty()) return -1;
  return order_.begin()->second;
}

Solver::Result Solver::solve(long conflict_limit) {
  if (empty_clause_ >= 0) return Result::Unsat;
  for (int a = 0; a < num_atoms_; ++a) order_.insert({-activity_[a], a});
  for (int cid : units_) {
    Lit l = clauses_[cid][0];
    if (value(l) == 0) {
      derive_empty(cid);
      return Result::Unsat;
    }
    if (value(l) < 0) enqueue(l, cid);
  }
  while (true) {
    int conflict = propagate();
    if (conflict >= 0) {
      ++conflicts_;
      if (level_start_.empty()) {
        derive_empty(conflict);
        return Result::Unsat;
      }
      if (conflicts_ > conflict_limit) return Result::Unknown;
      learn_from(conflict);
      continue;
    }
    int a = pick_branch_atom();
    if (a < 0) return Result::Sat;
    level_start_.push_back(trail_.size());
    enqueue(neg_lit(a), -1);
  }
}

}  // namespace patholab::sat
