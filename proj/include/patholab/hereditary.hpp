// Hereditary analysis: the patho pipeline applied to every subformula that
// could itself define a class, i.e. every subformula with exactly one free
// variable. Such subformulas are renamed so that the variable is x.

#ifndef PATHOLAB_HEREDITARY_HPP
#define PATHOLAB_HEREDITARY_HPP

#include <string>
#include <vector>

#include "patholab/formula.hpp"
#include "patholab/refuter.hpp"

namespace patholab::hereditary {

enum class Verdict { ProvedPatho, CertifiedNonPatho, Unknown, Skipped };
enum class Overall { SubPatho, CertifiedHnP, Unknown };

const char* verdict_name(Verdict v);
const char* overall_name(Overall o);

struct Entry {
  std::size_t position;   // pre-order index; 0 is the whole formula
  Formula subformula;     // as it occurs
  std::string canonical;  // printed after renaming the free variable to x; empty when skipped
  Verdict verdict;
  std::string reason;     // why the entry was skipped or left unknown
};

struct HereditaryReport {
  std::vector<Entry> entries;
  Overall overall;
};

// SubPatho if any entry is ProvedPatho, CertifiedHnP if every checked entry
// is CertifiedNonPatho, Unknown otherwise. Skipped entries do not count.
Overall aggregate(const std::vector<Entry>& entries);

// Throws model::UnsupportedTerm if a checked subformula uses function symbols.
HereditaryReport hereditary_scan(const NearlyClosed& a, const refuter::Budget& budget, int max_size);

}  // namespace patholab::hereditary

#endif  // PATHOLAB_HEREDITARY_HPP
