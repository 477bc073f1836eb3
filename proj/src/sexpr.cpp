#include "pispan/sexpr.hpp"

#include <cctype>

#include "pispan/error.hpp"

namespace pispan {

std::string SExpr::head() const {
  if (!is_list() || items.empty() || items.front().kind != Kind::Symbol) return "";
  return items.front().text;
}

const SExpr* SExpr::option(const std::string& key) const {
  for (std::size_t k = 1; k + 1 < items.size(); ++k) {
    if (items[k].is_symbol(key)) return &items[k + 1];
  }
  return nullptr;
}

std::vector<const SExpr*> SExpr::positional() const {
  std::vector<const SExpr*> out;
  for (std::size_t k = 1; k < items.size(); ++k) {
    if (items[k].is_keyword()) {
      ++k;
      continue;
    }
    out.push_back(&items[k]);
  }
  return out;
}

const std::string& SExpr::atom() const {
  if (is_list()) throw ParseError("expected an atom, found a list", line, column);
  return text;
}

std::string SExpr::where() const { return std::to_string(line) + ":" + std::to_string(column); }

std::string SExpr::str() const {
  switch (kind) {
    case Kind::Symbol: return text;
    case Kind::String: return "\"" + text + "\"";
    case Kind::List: break;
  }
  std::string s = "(";
  for (std::size_t k = 0; k < items.size(); ++k) s += (k ? " " : "") + items[k].str();
  return s + ")";
}

namespace {

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  bool more() {
    skip();
    return pos_ < text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      node.kind = SExpr::Kind::List;
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unclosed list", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      advance();
      node.kind = SExpr::Kind::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
        node.text += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", node.line, node.column);
      advance();
      return node;
    }
    node.kind = SExpr::Kind::Symbol;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '"' && text_[pos_] != ';') {
      node.text += text_[pos_];
      advance();
    }
    return node;
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

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';' || c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(const std::string& text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (r.more()) out.push_back(r.read());
  return out;
}

SExpr parse_sexpr(const std::string& text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) throw ParseError("expected exactly one form, found " + std::to_string(all.size()), 1, 1);
  return all.front();
}

}  // namespace pispan
