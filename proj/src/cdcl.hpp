// Conflict-driven clause learning over ground atoms, with every learned
// clause recorded as a chain of binary resolutions from earlier clauses.

#ifndef PATHOLAB_SRC_CDCL_HPP
#define PATHOLAB_SRC_CDCL_HPP

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace patholab::sat {

// 2 * atom + 1 for the negated literal.
using Lit = int;
inline Lit pos_lit(int atom) { return 2 * atom; }
inline Lit neg_lit(int atom) { return 2 * atom + 1; }
inline int atom_of(Lit l) { return l >> 1; }
inline Lit negate(Lit l) { return l ^ 1; }

// start resolved successively with each (clause, pivot atom).
struct Chain {
  int start = -1;
  std::vector<std::pair<int, int>> steps;
};

class Solver {
 public:
  enum class Result { Sat, Unsat, Unknown };

  explicit Solver(int num_atoms);

  // Input clause; literals are deduplicated. Returns the clause id.
  int add_clause(std::vector<Lit> lits);

  Result solve(long conflict_limit);

  const std::vector<Lit>& clause(int id) const { return clauses_[id]; }
  bool is_input(int id) const { return id < num_input_; }
  const Chain& derivation(int id) const { return chains_[id - num_input_]; }
  int empty_clause() const { return empty_clause_; }
  long conflicts() const { return conflicts_; }
  // Value of an atom in the satisfying assignment after a Sat answer.
  bool model_value(int atom) const { return assign_[atom] == 1; }

 private:
  int8_t value(Lit l) const;
  void enqueue(Lit l, int reason);
  int propagate();
  void backtrack(int level);
  int learn_from(int conflict);
  void derive_empty(int conflict);
  int add_derived(std::vector<Lit> lits, Chain chain);
  void attach(int id);
  void bump(int atom);
  int pick_branch_atom();

  int num_atoms_;
  int num_input_ = 0;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Chain> chains_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;

  std::vector<int8_t> assign_;  // -1 unassigned, 0 false, 1 true (per atom)
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_pos_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> level_start_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double bump_ = 1.0;
  std::set<std::pair<double, int>> order_;  // (-activity, atom) of unassigned atoms

  int empty_clause_ = -1;
  long conflicts_ = 0;
};

}  // namespace patholab::sat

#endif  // PATHOLAB_SRC_CDCL_HPP
