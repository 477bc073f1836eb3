#pragma once

#include <string>
#include <vector>

namespace pispan {

// Minimal s-expression tree: symbols, double-quoted strings and lists.
// `;` and `#` start comments that run to the end of the line.
struct SExpr {
  enum class Kind { Symbol, String, List };

  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol(const std::string& s) const { return kind == Kind::Symbol && text == s; }
  bool is_keyword() const { return kind == Kind::Symbol && !text.empty() && text.front() == ':'; }
  // First symbol of a list, or "" when there is none.
  std::string head() const;
  // The item following `:key` in a list, or nullptr.
  const SExpr* option(const std::string& key) const;
  // List items after the head that are neither keywords nor keyword values.
  std::vector<const SExpr*> positional() const;
  // Symbol or string payload; throws Parse for lists.
  const std::string& atom() const;
  std::string where() const;
  std::string str() const;
};

// Parses every top-level form in `text`.
std::vector<SExpr> parse_sexprs(const std::string& text);
SExpr parse_sexpr(const std::string& text);

}  // namespace pispan
