// Negation normal form, Skolemization and clause form for closed sentences.

#ifndef PATHOLAB_NORMAL_FORM_HPP
#define PATHOLAB_NORMAL_FORM_HPP

#include <functional>
#include <string>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab::nf {

// Only And, Or, Forall, Exists, Verum, Falsum and (negated) atoms remain.
Formula nnf(const Formula& f);

struct SkolemForm {
  std::vector<std::string> universals;  // prefix, outermost first
  Formula matrix;                       // quantifier-free, in NNF
  std::vector<std::pair<std::string, std::size_t>> skolem_symbols;  // (name, arity) in creation order

  Formula sentence() const;  // forall u0 ... forall uk: matrix
};

// Skolemizes a closed, abstraction-free sentence. `next_symbol` supplies a
// fresh function name for each existential, in traversal order. A Skolem
// term takes as arguments only the universals free in its existential's scope.
SkolemForm skolemize(const Formula& sentence, const std::function<std::string()>& next_symbol);

// A disjunction of literals; each literal is an atom or a negated atom.
using Clause = std::vector<Formula>;

// CNF of a quantifier-free NNF matrix. Tautologies and duplicate literals
// are removed; Verum/Falsum are simplified away (an empty clause means the
// matrix is unsatisfiable). Returns false if more than `limit` clauses.
bool clausify(const Formula& matrix, std::vector<Clause>& out, std::size_t limit);

// Clause as a formula: left-nested disjunction, or Falsum when empty.
Formula clause_formula(const Clause& c);

// Splits a clause formula into literals; false if it is not a clause.
bool clause_literals(const Formula& f, Clause& out);

// Strips leading universal quantifiers.
Formula strip_universals(const Formula& f, std::vector<std::string>* vars = nullptr);

}  // namespace patholab::nf

#endif  // PATHOLAB_NORMAL_FORM_HPP
