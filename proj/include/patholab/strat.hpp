// Quine stratification: membership raises the level by one, identity keeps
// it, and a set abstraction sits one level above its bound variable.

#ifndef PATHOLAB_STRAT_HPP
#define PATHOLAB_STRAT_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab::strat {

// level(upper) = level(lower) + offset, with offset in {0, 1}.
struct LevelConstraint {
  std::string lower;
  std::string upper;
  int offset;
  std::string origin;  // printed atom or abstraction that produced it
};

// One traversal step of a conflict cycle: level(to) - level(from) = delta
// according to some constraint (read forwards or backwards).
struct CycleStep {
  std::string from;
  std::string to;
  int delta;
};

struct Stratified {
  std::map<std::string, int> levels;
};

struct Unstratified {
  std::vector<CycleStep> cycle;
  int offset_sum() const;
};

using StratResult = std::variant<Stratified, Unstratified>;

struct ConstraintSystem {
  // Level variables in deterministic creation order. Bound variables are
  // renamed apart as name#k when a name is bound more than once.
  std::vector<std::string> nodes;
  std::vector<LevelConstraint> constraints;
};

ConstraintSystem level_constraints(const Formula& f);

StratResult stratify(const Formula& f);

bool is_stratified(const StratResult& r);

// Checks an assignment against every constraint.
bool satisfies(const ConstraintSystem& sys, const std::map<std::string, int>& levels);

// Checks that a conflict cycle is closed, uses only constraints of `sys`,
// and has a nonzero offset sum.
bool valid_conflict(const ConstraintSystem& sys, const Unstratified& u);

std::string describe(const StratResult& r);

}  // namespace patholab::strat

#endif  // PATHOLAB_STRAT_HPP
