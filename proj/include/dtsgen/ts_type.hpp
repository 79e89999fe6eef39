// ts_type.hpp - TypeScript type terms shared by inference, parser, emitter and comparator
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dtsgen
{

struct Field;

/// A TypeScript type term.
///
/// The generator only ever produces the primitive, Void, Null, Undefined,
/// Named, Array, Callback, ObjectLiteral, Object and Union kinds. The
/// remaining kinds exist so the declaration parser can represent (and tag)
/// everything it reads.
struct TsType
{
  enum class Kind : std::uint8_t {
    String,
    Number,
    Boolean,
    Named,          // built-in, interface, class or alias reference; `name` is qualified
    Callback,       // `fields` are parameters, `args[0]` is the return type
    ObjectLiteral,  // structural shape; `fields` are properties, `name` an optional naming hint
    Array,          // `args[0]` is the element type
    Object,         // the `object` keyword
    Null,
    Undefined,
    Void,
    Union,
    Intersection,
    Tuple,
    Literal,        // string / number / boolean literal; `name` holds source text
    Any,
    Unknown,
    Never,
    Opaque,         // keyof / typeof / indexed access / conditional / mapped; `name` holds a summary
    Unspecified,    // omitted annotation (e.g. `declare function f(a);`)
  };

  enum Flags : std::uint32_t {
    kNone = 0,
    kIndexSignature = 1u << 0,      // ObjectLiteral carries `[k: K]: V`
    kCallSignature = 1u << 1,       // ObjectLiteral carries `(...): R`
    kConstructSignature = 1u << 2,  // ObjectLiteral carries `new (...): R`
    kReadonlyArray = 1u << 3,       // `readonly T[]`
    kConstructorType = 1u << 4,     // Callback written as `new (...) => R`
  };

  Kind kind = Kind::Unspecified;
  std::string name;
  std::vector<TsType> args;
  std::vector<Field> fields;
  std::uint32_t flags = kNone;

  static TsType string();
  static TsType number();
  static TsType boolean();
  static TsType void_type();
  static TsType null();
  static TsType undefined();
  static TsType object();
  static TsType any();
  static TsType unspecified();
  static TsType named(std::string name, std::vector<TsType> type_args = {});
  static TsType array(TsType element);
  static TsType callback(std::vector<Field> params, TsType ret);
  static TsType object_literal(std::vector<Field> props);
  static TsType literal(std::string text);

  [[nodiscard]] bool is(Kind k) const { return kind == k; }
  [[nodiscard]] bool is_primitive() const
  {
    return kind == Kind::String || kind == Kind::Number || kind == Kind::Boolean;
  }
  [[nodiscard]] const TsType & element() const { return args.at(0); }
  [[nodiscard]] const TsType & return_type() const { return args.at(0); }
};

/// A named member: a function/callback parameter or an object/interface property.
struct Field
{
  enum Modifier : std::uint32_t {
    kNoModifier = 0,
    kStatic = 1u << 0,
    kPrivate = 1u << 1,
    kPublic = 1u << 2,
    kProtected = 1u << 3,
    kReadonly = 1u << 4,
    kAbstract = 1u << 5,
  };

  std::string name;
  TsType type;
  bool optional = false;
  bool rest = false;
  std::uint32_t modifiers = kNoModifier;
};

enum class ObjectMerge : std::uint8_t { Keep, Componentwise };

/// Builds a canonical union: nested unions flattened, duplicates removed, members
/// sorted by canonical rank. One remaining member is returned unwrapped. With
/// ObjectMerge::Componentwise all object-literal members fold into one shape.
TsType make_union(std::vector<TsType> members, ObjectMerge objects = ObjectMerge::Keep);

/// Union of two object shapes: shared properties get the union of their types,
/// properties present on only one side become optional.
TsType merge_object_literals(const TsType & a, const TsType & b);

/// Members of a union, or the type itself as a single member.
std::vector<TsType> union_members(const TsType & t);

bool contains_kind(const TsType & t, TsType::Kind kind);
TsType remove_members(const TsType & t, TsType::Kind kind);

/// Canonical ordering group: primitives, built-ins, interface refs, callbacks,
/// arrays, object, null, undefined (parser-only kinds sort in between).
int canonical_rank(const TsType & t);

/// Structural identity key. Parameter names do not contribute; object
/// properties are keyed in name order; unions are keyed in canonical order.
std::string canonical_key(const TsType & t);

bool equivalent(const TsType & a, const TsType & b);
bool canonical_less(const TsType & a, const TsType & b);

/// Recursively canonicalizes unions (ordering + dedup) without merging objects.
TsType canonicalize(const TsType & t);

/// TypeScript source rendering. Object-literal property names are left bare.
std::string render(const TsType & t);
std::string render_params(const std::vector<Field> & params);

/// Names that need no quoting when used as a property or parameter name.
bool is_identifier(std::string_view name);

std::string_view kind_name(TsType::Kind kind);

}  // namespace dtsgen
