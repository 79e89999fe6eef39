// parser.hpp - declaration-file parser producing the normalized AST
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "dtsgen/declaration.hpp"

namespace dtsgen
{

class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string & message, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column)
  {
  }

  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parses a .d.ts file into a DeclarationModule with feature tags computed.
/// Constructs outside the supported subset (imports, enums, `declare module "x"`,
/// mapped/conditional types, ...) are recorded as unsupported syntax rather than
/// rejected. Throws ParseError on malformed input.
DeclarationModule parse(std::string_view source, const std::string & module_name = "");

/// Parses a single type expression.
TsType parse_type(std::string_view source);

/// Substitutes every type alias at its use sites and removes the alias
/// declarations. Throws ParseError (line 0) on cyclic aliases.
DeclarationModule expand_aliases(const DeclarationModule & module);

}  // namespace dtsgen
