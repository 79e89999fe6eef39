#include "lexer.hpp"

#include <cctype>

#include "dtsgen/parser.hpp"

namespace dtsgen::detail
{

namespace
{

bool ident_start(char c)
{
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool ident_part(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

class Lexer
{
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run()
  {
    std::vector<Token> out;
    bool newline = false;
    while (true) {
      newline = skip_trivia(out, newline);
      Token t;
      t.line = line_;
      t.column = column_;
      t.newline_before = newline;
      newline = false;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        t.kind = Token::Kind::Identifier;
        while (pos_ < src_.size() && ident_part(src_[pos_])) t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Token::Kind::Number;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                                       src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (c == '"' || c == '\'') {
        t.kind = Token::Kind::String;
        t.text = string_literal(c, t);
      } else if (c == '`') {
        t.kind = Token::Kind::Template;
        t.text = template_literal(t);
      } else if (src_.substr(pos_, 3) == "...") {
        t.kind = Token::Kind::Punct;
        t.text = "...";
        advance(3);
      } else if (src_.substr(pos_, 2) == "=>") {
        t.kind = Token::Kind::Punct;
        t.text = "=>";
        advance(2);
      } else {
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, advance());
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance()
  {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void advance(std::size_t n)
  {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

  /// Skips whitespace and comments. Returns whether a line break was crossed.
  bool skip_trivia(std::vector<Token> & out, bool newline)
  {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        newline = true;
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        Token t;
        t.line = line_;
        t.column = column_;
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != '\n') text += advance();
        if (text.starts_with("///")) {
          const auto lt = text.find_first_not_of(" \t", 3);
          if (lt != std::string::npos && text[lt] == '<') {
            t.kind = Token::Kind::TripleSlash;
            t.text = text;
            t.newline_before = true;
            out.push_back(std::move(t));
          }
        }
      } else if (src_.substr(pos_, 2) == "/*") {
        const int line = line_;
        const int column = column_;
        advance(2);
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") {
          if (src_[pos_] == '\n') newline = true;
          advance();
        }
        if (pos_ >= src_.size()) throw ParseError("unterminated comment", line, column);
        advance(2);
      } else {
        break;
      }
    }
    return newline;
  }

  std::string string_literal(char quote, const Token & start)
  {
    advance();
    std::string text;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw ParseError("unterminated string literal", start.line, start.column);
      }
      const char c = advance();
      if (c == quote) return text;
      if (c == '\\' && pos_ < src_.size()) {
        const char e = advance();
        switch (e) {
          case 'n': text += '\n'; break;
          case 't': text += '\t'; break;
          case 'r': text += '\r'; break;
          case '0': text += '\0'; break;
          case '\n': break;
          default: text += e; break;
        }
        continue;
      }
      text += c;
    }
  }

  std::string template_literal(const Token & start)
  {
    advance();
    std::string text;
    int braces = 0;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unterminated template literal", start.line, start.column);
      const char c = advance();
      if (c == '\\' && pos_ < src_.size()) {
        text += c;
        text += advance();
        continue;
      }
      if (c == '`' && braces == 0) return text;
      if (c == '{' && !text.empty() && text.back() == '$') ++braces;
      if (c == '}' && braces > 0) --braces;
      text += c;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace dtsgen::detail
