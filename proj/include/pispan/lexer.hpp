#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pispan {

// Character cursor shared by the small hand-written parsers (.pi, .usg,
// indices, types). Whitespace and `#` comments are skipped by skip_ws().
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws();
  bool at_end();
  char peek();
  char peek_at(std::size_t offset);
  bool starts_with(std::string_view token);

  // Consumes `token` (after whitespace) if present.
  bool accept(std::string_view token);
  // Consumes a keyword only when it is not followed by an identifier char.
  bool accept_keyword(std::string_view word);
  void expect(std::string_view token);

  bool at_identifier();
  std::string identifier();
  bool at_number();
  std::uint64_t number();

  [[noreturn]] void fail(const std::string& message) const;

  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_ident_start(char c);
bool is_ident_char(char c);

}  // namespace pispan
