// lexer.hpp - tokenizer for declaration files (internal)
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dtsgen::detail
{

struct Token
{
  enum class Kind { Identifier, String, Number, Template, Punct, TripleSlash, End };

  Kind kind = Kind::End;
  std::string text;  // strings without quotes, punctuation verbatim
  int line = 1;
  int column = 1;
  bool newline_before = false;

  [[nodiscard]] bool is(std::string_view punct) const { return kind == Kind::Punct && text == punct; }
  [[nodiscard]] bool is_word(std::string_view word) const { return kind == Kind::Identifier && text == word; }
};

/// Splits source text into tokens; comments are dropped, `///` directives kept.
/// Throws ParseError on unterminated strings or comments.
std::vector<Token> tokenize(std::string_view source);

}  // namespace dtsgen::detail
