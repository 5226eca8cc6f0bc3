// Syntactic pathology: recognizes the non-circularity formulas
//
//   NC_1 = not (x in x)
//   NC_n = not exists x1 ... x(n-1): (x in x1 & x1 in x2 & ... & x(n-1) in x)
//
// where n counts membership steps of the chain from x back to x, together
// with their derivatives, in which chain atoms carry an inserted "& not B" or
// "| B" for an arbitrary formula B.

#ifndef PATHOLAB_SYNTPATHO_HPP
#define PATHOLAB_SYNTPATHO_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab::synt {

enum class InsertionKind { AndNotB, OrB };

struct Insertion {
  // Index of the chain atom (0..n-1), or n for an insertion on the whole body.
  int position;
  InsertionKind kind;
  Formula inserted;  // B itself, not "not B"
};

struct NcnMatch {
  int n = 0;
  // x followed by the n-1 bound chain variables, in chain order.
  std::vector<std::string> chain_vars;
  std::vector<Insertion> insertions;
};

// Pure NC_n, modulo renaming and reordering of the bound variables and
// reassociation of the conjunction. The conjuncts follow the chain starting
// at x. `f` must have the single free variable `x`.
std::optional<NcnMatch> match_ncn(const Formula& f);

// NC_n skeleton with at least one insertion: each chain atom may be replaced
// by (atom & not B) or (atom | B), and the whole body may carry one more
// trailing "& not B" or "| B".
std::optional<NcnMatch> match_derivative(const Formula& f);

struct SyntP {
  NcnMatch match;
  Formula witness;  // the (renamed) formula or subformula that matched
};
struct SyntHnP {};

using SyntVerdict = std::variant<SyntP, SyntHnP>;

// SyntP if the formula or any subformula with exactly one free variable
// (renamed to x) matches NC_n or a derivative.
SyntVerdict synt_classify(const Formula& f);

bool is_syntp(const SyntVerdict& v);

// The pure NC_n formula with bound variables named x1, x2, ...
Formula build_ncn(int n);

std::string describe(const NcnMatch& m);
const char* insertion_kind_name(InsertionKind k);

}  // namespace patholab::synt

#endif  // PATHOLAB_SYNTPATHO_HPP
