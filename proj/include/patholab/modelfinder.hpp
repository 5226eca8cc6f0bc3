// Finite extensional models of the comprehension theory of a candidate
// predicate. A model is a certificate that the theory is consistent.
//
// Matrices are enumerated size by size. Within a size the cells are read
// column by column (the member set of element 0 first, then element 1, ...)
// and a present edge is tried before an absent one; "lexicographic" below
// always refers to this order. Extensionality is enforced structurally: two
// distinct elements never have the same member set. As a consequence the
// denotation of every abstraction is forced by the matrix.

#ifndef PATHOLAB_MODELFINDER_HPP
#define PATHOLAB_MODELFINDER_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "patholab/formula.hpp"
#include "patholab/refuter.hpp"

namespace patholab::model {

struct Model {
  int size = 0;
  // membership[i][j]: element i is a member of element j.
  std::vector<std::vector<bool>> membership;
  // Abstraction constant -> element. Parameterized abstractions are keyed by
  // their applied form, e.g. "c1(0,2)".
  std::map<std::string, int> denotations;

  bool member(int i, int j) const { return membership[i][j]; }
  int extension_size(int j) const;
};

class UnsupportedTerm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Env = std::map<std::string, int>;

// Standard satisfaction. Constants and applied abstraction symbols are read
// from the denotation map; a set abstraction term denotes the element whose
// member set equals its extension. Throws UnsupportedTerm for symbols without
// a denotation and for abstractions whose extension is not an element.
bool eval_formula(const Model& m, const Formula& f, const Env& env = {});
int eval_term(const Model& m, const Term& t, const Env& env = {});

// True iff the model is extensional and satisfies every sentence of t.
bool satisfies_theory(const Model& m, const refuter::Theory& t, std::string* error = nullptr);

struct NotFound {
  int max_size = 0;
};

using FindResult = std::variant<Model, NotFound>;

// Throws UnsupportedTerm when the predicate uses function symbols.
FindResult find_model(const NearlyClosed& a, int max_size);

struct CertifiedNonPatho {
  Model model;
};
struct Unknown {
  int max_size = 0;
};
using CertifyResult = std::variant<CertifiedNonPatho, Unknown>;

CertifyResult certify_nonpatho(const NearlyClosed& a, int max_size);

enum class SizeKind { Slim, Mighty, Balanced };

struct SizeClass {
  SizeKind kind;
  int members;
  int complement;
};

const char* size_kind_name(SizeKind k);

// Throws std::out_of_range if the constant is not denoted in m.
SizeClass size_class(const Model& m, const std::string& constant);

// "size n", n rows of 0/1, then "den <constant> <index>" lines.
std::string serialize_model(const Model& m);
Model parse_model(const std::string& text);

}  // namespace patholab::model

#endif  // PATHOLAB_MODELFINDER_HPP
