// compare.hpp - structural diff of an expected and an actual declaration module
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtsgen/declaration.hpp"

namespace dtsgen
{

class CompareError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class DifferenceKind : std::uint8_t {
  TemplateDifference,
  ExportAssignmentDifference,
  FunctionMissingDifference,
  FunctionExtraDifference,
  FunctionOverloadingDifference,
  ParameterMissingDifference,
  ParameterExtraDifference,
  ParameterTypeDifference,
};

enum class Solvability : std::uint8_t { Solvable, Unsolvable, NotApplicable };

std::string_view kind_name(DifferenceKind kind);
std::string_view solvability_name(Solvability s);

struct Difference
{
  DifferenceKind kind = DifferenceKind::TemplateDifference;
  std::string path;
  std::string expected;
  std::string actual;
  Solvability solvability = Solvability::NotApplicable;

  bool operator==(const Difference &) const = default;
};

struct ComparisonReport
{
  std::string module;
  TemplateKind template_kind = TemplateKind::Module;
  std::vector<Difference> differences;
  std::set<FeatureTag> tags;
};

/// A parameter or property type together with its optionality.
struct TypedSlot
{
  TsType type;
  bool optional = false;
};

/// Solvable when more examples could turn `actual` into `expected`.
Solvability classify_type_difference(const TypedSlot & expected, const TypedSlot & actual);

/// Both modules are alias-expanded and normalized internally. Throws
/// CompareError if an alias survives expansion.
ComparisonReport compare(const DeclarationModule & expected, const DeclarationModule & actual,
                         const std::string & module_name);

/// `{"module", "template", "differences", "tags"}` with 4-space indentation.
std::string report_json(const ComparisonReport & report);

/// True when the expected file uses constructs the generator never produces.
bool filtered_out(const DeclarationModule & module);

/// Tags of a file that cause filtering.
std::vector<FeatureTag> unimplemented_tags(const DeclarationModule & module);

}  // namespace dtsgen
