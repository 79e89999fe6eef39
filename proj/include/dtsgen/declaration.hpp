// declaration.hpp - normalized declaration-file AST shared by emitter, parser and comparator
#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dtsgen/ts_type.hpp"

namespace dtsgen
{

using Param = Field;

enum class TemplateKind : std::uint8_t { Module, ModuleClass, ModuleFunction };

std::string_view template_name(TemplateKind kind);
std::optional<TemplateKind> template_from_name(std::string_view name);

/// One call signature. Parameter names are carried for printing only.
struct Signature
{
  std::vector<std::string> type_params;
  std::vector<Param> params;
  TsType return_type;
};

struct FunctionDecl
{
  std::string name;
  std::vector<Signature> overloads;
  std::uint32_t modifiers = Field::kNoModifier;
  bool optional = false;  // `name?(...)` members
};

struct InterfaceDecl
{
  std::string name;
  std::vector<std::string> type_params;
  std::vector<TsType> extends;
  std::vector<Field> properties;
  std::vector<FunctionDecl> methods;
  std::vector<Signature> call_signatures;
  std::vector<Signature> construct_signatures;
  std::vector<Field> index_signatures;  // name = key parameter, type = value type
};

struct ClassDecl
{
  std::string name;
  std::vector<std::string> type_params;
  std::vector<TsType> heritage;
  std::vector<Signature> constructors;
  std::vector<FunctionDecl> methods;
  std::vector<Field> properties;
  std::vector<Field> index_signatures;
};

struct AliasDecl
{
  std::string name;
  std::vector<std::string> type_params;
  TsType type;
};

struct VariableDecl
{
  std::string name;
  TsType type;
  bool is_const = false;
};

struct NamespaceDecl;

struct Scope
{
  std::vector<FunctionDecl> functions;
  std::vector<ClassDecl> classes;
  std::vector<InterfaceDecl> interfaces;
  std::vector<AliasDecl> aliases;
  std::vector<VariableDecl> variables;
  std::vector<NamespaceDecl> namespaces;

  [[nodiscard]] bool empty() const;
  [[nodiscard]] const FunctionDecl * find_function(std::string_view name) const;
  [[nodiscard]] const ClassDecl * find_class(std::string_view name) const;
  [[nodiscard]] const InterfaceDecl * find_interface(std::string_view name) const;
  [[nodiscard]] const NamespaceDecl * find_namespace(std::string_view name) const;
  [[nodiscard]] const AliasDecl * find_alias(std::string_view name) const;
  NamespaceDecl & namespace_named(const std::string & name);
};

struct NamespaceDecl
{
  std::string name;
  Scope body;
};

/// The Table-1 feature vocabulary plus one marker for syntax the parser skips.
enum class FeatureTag : std::uint8_t {
  TypeString,
  OptionalParameter,
  TypeBoolean,
  TypeNumber,
  TypeVoid,
  TypeUnion,
  TypeFunction,
  TypeArray,
  TypeAny,
  TypeLiterals,
  AliasType,
  IndexSignature,
  GenericsFunction,
  DotDotDotToken,
  CallSignature,
  GenericsInterface,
  TypeObject,
  TypeUndefined,
  TypeIntersection,
  Readonly,
  TypeTuple,
  GenericsClass,
  Static,
  Private,
  Public,
  Protected,
  UnsupportedSyntax,
};

std::string_view tag_name(FeatureTag tag);
std::optional<FeatureTag> tag_from_name(std::string_view name);
const std::vector<FeatureTag> & all_feature_tags();

/// Tags describing constructs the generator never produces. A declaration file
/// carrying any of them is excluded from comparison.
bool is_unimplemented(FeatureTag tag);

struct DeclarationModule
{
  std::string module_name;
  TemplateKind template_kind = TemplateKind::Module;
  std::optional<std::string> export_assignment;
  Scope scope;
  std::vector<std::string> unsupported;  // human-readable reasons for UnsupportedSyntax
  std::set<FeatureTag> feature_tags;
};

/// Recomputes the feature tags from the AST content.
std::set<FeatureTag> tag_features(const DeclarationModule & module);

/// Sorts declarations by name, canonicalizes every type, drops empty namespaces and
/// turns callback-typed class properties into methods.
DeclarationModule normalize(const DeclarationModule & module);

/// Structural equality; parameter names never contribute.
bool equivalent(const DeclarationModule & a, const DeclarationModule & b);

/// Identity key of a signature (parameter names excluded).
std::string signature_key(const Signature & sig);

/// The canonical AST JSON printed by `dts-generate parse`.
std::string to_json(const DeclarationModule & module, int indent = 2);

}  // namespace dtsgen
