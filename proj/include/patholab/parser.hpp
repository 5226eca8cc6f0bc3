#ifndef PATHOLAB_PARSER_HPP
#define PATHOLAB_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patholab/formula.hpp"

namespace patholab {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& found);

  int line() const { return line_; }
  int column() const { return column_; }
  // Sorted, duplicate-free labels such as "term" or "')'".
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

struct ParseResult {
  Formula formula;
  std::vector<std::string> warnings;  // e.g. shadowed binders
};

// Grammar (lowest precedence first):
//   formula := iff;  iff := imp ("<->" imp)*;  imp := or ("->" or)*;
//   or := and ("|" and)*;  and := unary ("&" unary)*;
//   unary := "not" unary | ("forall" | "exists") IDENT ":" formula | atom;
//   atom := "Verum" | "Falsum" | term ("in" | "=") term | "(" formula ")";
//   term := IDENT | "{" IDENT ":" formula "}" | IDENT "(" term ("," term)* ")".
// Binary connectives associate to the left. A quantifier body extends as far
// right as possible. "#" starts a comment running to the end of the line.
// Throws ParseError.
ParseResult parse_with_warnings(std::string_view text);
Formula parse(std::string_view text);

}  // namespace patholab

#endif  // PATHOLAB_PARSER_HPP
