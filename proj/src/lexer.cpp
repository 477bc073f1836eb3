#include "pispan/lexer.hpp"

#include <cctype>

#include "pispan/error.hpp"

namespace pispan {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::IllFormedSubstitution: return "IllFormedSubstitution";
    case ErrorKind::OpenExpression: return "OpenExpression";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::UnboundIndexVariable: return "UnboundIndexVariable";
    case ErrorKind::IncompatibleTypes: return "IncompatibleTypes";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::SideConditionUnknown: return "SideConditionUnknown";
    case ErrorKind::SideConditionRefuted: return "SideConditionRefuted";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

bool is_ident_start(char c) { return c >= 'a' && c <= 'z'; }

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

void Cursor::skip_ws() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++pos_;
    } else if (c == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    } else {
      break;
    }
  }
}

bool Cursor::at_end() {
  skip_ws();
  return pos_ >= text_.size();
}

char Cursor::peek() {
  skip_ws();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

char Cursor::peek_at(std::size_t offset) {
  skip_ws();
  return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
}

bool Cursor::starts_with(std::string_view token) {
  skip_ws();
  return text_.substr(pos_, token.size()) == token;
}

bool Cursor::accept(std::string_view token) {
  if (!starts_with(token)) return false;
  pos_ += token.size();
  return true;
}

bool Cursor::accept_keyword(std::string_view word) {
  if (!starts_with(word)) return false;
  std::size_t end = pos_ + word.size();
  if (end < text_.size() && is_ident_char(text_[end])) return false;
  pos_ = end;
  return true;
}

void Cursor::expect(std::string_view token) {
  if (!accept(token)) fail("expected '" + std::string(token) + "'");
}

bool Cursor::at_identifier() { return is_ident_start(peek()); }

std::string Cursor::identifier() {
  if (!at_identifier()) fail("expected identifier");
  std::size_t start = pos_;
  while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
  return std::string(text_.substr(start, pos_ - start));
}

bool Cursor::at_number() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

std::uint64_t Cursor::number() {
  if (!at_number()) fail("expected number");
  std::uint64_t value = 0;
  while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
    value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
    ++pos_;
  }
  return value;
}

void Cursor::fail(const std::string& message) const {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
    if (text_[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ParseError(message, line, column);
}

}  // namespace pispan
