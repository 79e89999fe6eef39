// emitter.hpp - prints a DeclarationModule as a .d.ts file
#pragma once

#include <stdexcept>
#include <string>

#include "dtsgen/declaration.hpp"

namespace dtsgen
{

class EmitError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Checks the per-template shape invariants. Throws EmitError.
void check_template(const DeclarationModule & module);

/// Deterministic declaration text in the layout of the chosen template.
/// Interface properties are printed quoted (`'name'?: type;`).
std::string emit(const DeclarationModule & module);

}  // namespace dtsgen
