#include "patholab/parser.hpp"

#include <algorithm>
#include <cctype>

namespace patholab {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) s += i + 1 == expected.size() ? " or " : ", ";
    s += expected[i];
  }
  return s;
}

std::vector<std::string> normalized(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, const std::string& found)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": expected " +
                         describe_expected(normalized(expected)) + ", found " + found),
      line_(line),
      column_(column),
      expected_(normalized(std::move(expected))),
      found_(found) {}

namespace {

enum class Tok { Ident, LParen, RParen, LBrace, RBrace, Colon, Comma, And, Or, Implies, Iff, Eq, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

constexpr int kMaxNesting = 2000;

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      int l = line_, c = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "end of input", l, c});
        return out;
      }
      char ch = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), l, c});
        continue;
      }
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, ch), l, c});
      };
      switch (ch) {
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case '{': single(Tok::LBrace); continue;
        case '}': single(Tok::RBrace); continue;
        case ':': single(Tok::Colon); continue;
        case ',': single(Tok::Comma); continue;
        case '&': single(Tok::And); continue;
        case '|': single(Tok::Or); continue;
        case '=': single(Tok::Eq); continue;
        default: break;
      }
      if (text_.substr(pos_, 2) == "->") {
        advance();
        advance();
        out.push_back({Tok::Implies, "->", l, c});
        continue;
      }
      if (text_.substr(pos_, 3) == "<->") {
        advance();
        advance();
        advance();
        out.push_back({Tok::Iff, "<->", l, c});
        continue;
      }
      std::string shown = (static_cast<unsigned char>(ch) < 0x80) ? std::string("'") + ch + "'" : "non-ASCII byte";
      throw ParseError(l, c, {"token"}, shown);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail({"'&'", "'|'", "'->'", "'<->'", "end of input"});
    return {std::move(f), std::move(warnings_)};
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), found);
  }

  void expect(Tok kind, const char* label) {
    if (peek().kind != kind) fail({label});
    ++pos_;
  }

  std::string identifier(const char* label) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail({label});
    return take().text;
  }

  struct Nest {
    explicit Nest(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNesting) p_.fail({"shallower nesting"});
    }
    ~Nest() { --p_.depth_; }
    Parser& p_;
  };

  Formula formula() {
    Nest guard(*this);
    Formula f = level(0);
    return f;
  }

  // Binary levels 0..3: <->, ->, |, &.
  Formula level(int lvl) {
    static constexpr Tok ops[] = {Tok::Iff, Tok::Implies, Tok::Or, Tok::And};
    static constexpr FormulaKind kinds[] = {FormulaKind::Iff, FormulaKind::Implies, FormulaKind::Or,
                                            FormulaKind::And};
    if (lvl == 4) return unary();
    Formula lhs = level(lvl + 1);
    while (peek().kind == ops[lvl]) {
      ++pos_;
      Formula rhs = level(lvl + 1);
      lhs = Formula::binary(kinds[lvl], std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula unary() {
    Nest guard(*this);
    if (at_keyword("not")) {
      ++pos_;
      return Formula::negation(unary());
    }
    if (at_keyword("forall") || at_keyword("exists")) {
      FormulaKind kind = take().text == "forall" ? FormulaKind::Forall : FormulaKind::Exists;
      const Token& binder = peek();
      std::string v = identifier("identifier");
      expect(Tok::Colon, "':'");
      bind(v, binder);
      Formula body = formula();
      unbind();
      return Formula::quantifier(kind, std::move(v), std::move(body));
    }
    return atom();
  }

  Formula atom() {
    if (at_keyword("Verum")) {
      ++pos_;
      return Formula::verum();
    }
    if (at_keyword("Falsum")) {
      ++pos_;
      return Formula::falsum();
    }
    if (peek().kind == Tok::LParen) {
      ++pos_;
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if ((peek().kind == Tok::Ident && !is_keyword(peek().text)) || peek().kind == Tok::LBrace) {
      Term lhs = term();
      bool membership;
      if (at_keyword("in")) {
        membership = true;
      } else if (peek().kind == Tok::Eq) {
        membership = false;
      } else {
        fail({"'in'", "'='"});
      }
      ++pos_;
      Term rhs = term();
      return membership ? Formula::membership(std::move(lhs), std::move(rhs))
                        : Formula::equality(std::move(lhs), std::move(rhs));
    }
    fail({"formula"});
  }

  Term term() {
    Nest guard(*this);
    if (peek().kind == Tok::LBrace) {
      ++pos_;
      const Token& binder = peek();
      std::string v = identifier("identifier");
      expect(Tok::Colon, "':'");
      bind(v, binder);
      Formula body = formula();
      unbind();
      expect(Tok::RBrace, "'}'");
      return Term::set_abs(std::move(v), std::move(body));
    }
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail({"term"});
    std::string name = take().text;
    if (peek().kind != Tok::LParen) return Term::variable(std::move(name));
    ++pos_;
    std::vector<Term> args;
    args.push_back(term());
    while (peek().kind == Tok::Comma) {
      ++pos_;
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return Term::fn_app(std::move(name), std::move(args));
  }

  void bind(const std::string& v, const Token& t) {
    if (std::find(scope_.begin(), scope_.end(), v) != scope_.end()) {
      warnings_.push_back("binder '" + v + "' at " + std::to_string(t.line) + ":" + std::to_string(t.column) +
                          " shadows an enclosing binder");
    }
    scope_.push_back(v);
  }

  void unbind() { scope_.pop_back(); }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<std::string> scope_;
  std::vector<std::string> warnings_;
};

}  // namespace

ParseResult parse_with_warnings(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

Formula parse(std::string_view text) { return parse_with_warnings(text).formula; }

}  // namespace patholab
