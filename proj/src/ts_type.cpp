#include "dtsgen/ts_type.hpp"

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>
#include <utility>

namespace dtsgen
{

TsType TsType::string() { return TsType{Kind::String, {}, {}, {}, kNone}; }
TsType TsType::number() { return TsType{Kind::Number, {}, {}, {}, kNone}; }
TsType TsType::boolean() { return TsType{Kind::Boolean, {}, {}, {}, kNone}; }
TsType TsType::void_type() { return TsType{Kind::Void, {}, {}, {}, kNone}; }
TsType TsType::null() { return TsType{Kind::Null, {}, {}, {}, kNone}; }
TsType TsType::undefined() { return TsType{Kind::Undefined, {}, {}, {}, kNone}; }
TsType TsType::object() { return TsType{Kind::Object, {}, {}, {}, kNone}; }
TsType TsType::any() { return TsType{Kind::Any, {}, {}, {}, kNone}; }
TsType TsType::unspecified() { return TsType{Kind::Unspecified, {}, {}, {}, kNone}; }

TsType TsType::named(std::string name, std::vector<TsType> type_args)
{
  return TsType{Kind::Named, std::move(name), std::move(type_args), {}, kNone};
}

TsType TsType::array(TsType element)
{
  TsType t{Kind::Array, {}, {}, {}, kNone};
  t.args.push_back(std::move(element));
  return t;
}

TsType TsType::callback(std::vector<Field> params, TsType ret)
{
  TsType t{Kind::Callback, {}, {}, std::move(params), kNone};
  t.args.push_back(std::move(ret));
  return t;
}

TsType TsType::object_literal(std::vector<Field> props)
{
  return TsType{Kind::ObjectLiteral, {}, {}, std::move(props), kNone};
}

TsType TsType::literal(std::string text)
{
  return TsType{Kind::Literal, std::move(text), {}, {}, kNone};
}

namespace
{

bool is_reference_name(const std::string & name)
{
  return name.find('.') != std::string::npos || name.rfind("I__", 0) == 0;
}

void flatten_into(TsType && t, std::vector<TsType> & out)
{
  if (t.is(TsType::Kind::Union)) {
    for (auto & m : t.args) flatten_into(std::move(m), out);
  } else {
    out.push_back(std::move(t));
  }
}

std::string quote_if_needed(const std::string & name)
{
  if (is_identifier(name)) return name;
  return "'" + name + "'";
}

bool needs_parens_in_union(const TsType & t)
{
  return t.is(TsType::Kind::Callback) || t.is(TsType::Kind::Intersection);
}

bool needs_parens_as_element(const TsType & t)
{
  return t.is(TsType::Kind::Callback) || t.is(TsType::Kind::Union) ||
         t.is(TsType::Kind::Intersection);
}

std::string render_field(const Field & f)
{
  // Signature members of object literals: `[key: string]`, `()` and `new()`.
  if (f.name.starts_with("[")) return f.name + ": " + render(f.type);
  if ((f.name == "()" || f.name == "new()") && f.type.is(TsType::Kind::Callback)) {
    return (f.name == "()" ? "(" : "new (") + render_params(f.type.fields) + "): " + render(f.type.return_type());
  }
  std::string out;
  if (f.modifiers & Field::kReadonly) out += "readonly ";
  if (f.rest) out += "...";
  out += quote_if_needed(f.name);
  if (f.optional) out += "?";
  if (!f.type.is(TsType::Kind::Unspecified)) out += ": " + render(f.type);
  return out;
}

}  // namespace

std::string_view kind_name(TsType::Kind kind)
{
  using K = TsType::Kind;
  switch (kind) {
    case K::String: return "string";
    case K::Number: return "number";
    case K::Boolean: return "boolean";
    case K::Named: return "named";
    case K::Callback: return "callback";
    case K::ObjectLiteral: return "object-literal";
    case K::Array: return "array";
    case K::Object: return "object";
    case K::Null: return "null";
    case K::Undefined: return "undefined";
    case K::Void: return "void";
    case K::Union: return "union";
    case K::Intersection: return "intersection";
    case K::Tuple: return "tuple";
    case K::Literal: return "literal";
    case K::Any: return "any";
    case K::Unknown: return "unknown";
    case K::Never: return "never";
    case K::Opaque: return "opaque";
    case K::Unspecified: return "unspecified";
  }
  return "unspecified";
}

int canonical_rank(const TsType & t)
{
  using K = TsType::Kind;
  switch (t.kind) {
    case K::String: return 0;
    case K::Number: return 1;
    case K::Boolean: return 2;
    case K::Literal: return 5;
    case K::Named: return is_reference_name(t.name) ? 20 : 10;
    case K::ObjectLiteral: return 25;
    case K::Callback: return 30;
    case K::Array: return 40;
    case K::Tuple: return 45;
    case K::Object: return 50;
    case K::Intersection: return 55;
    case K::Opaque: return 56;
    case K::Any: return 57;
    case K::Unknown: return 58;
    case K::Never: return 59;
    case K::Void: return 60;
    case K::Union: return 65;
    case K::Unspecified: return 66;
    case K::Null: return 70;
    case K::Undefined: return 80;
  }
  return 99;
}

namespace
{

/// Sort key of one member. Leaf kinds use their fixed name; the rest own a computed key.
struct RankedKey
{
  int rank = 0;
  std::string_view leaf;
  std::string owned;
  std::size_t index = 0;

  [[nodiscard]] std::string_view view() const { return owned.empty() ? leaf : std::string_view(owned); }
};

bool is_leaf(TsType::Kind kind)
{
  using K = TsType::Kind;
  switch (kind) {
    case K::Named:
    case K::Array:
    case K::Callback:
    case K::ObjectLiteral:
    case K::Union:
    case K::Intersection:
    case K::Tuple:
    case K::Literal:
    case K::Opaque: return false;
    default: return true;
  }
}

/// Members in canonical order: by rank, then by canonical key, stable otherwise.
boost::container::small_vector<RankedKey, 8> ranked_keys(const std::vector<TsType> & members)
{
  boost::container::small_vector<RankedKey, 8> out(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    out[i].rank = canonical_rank(members[i]);
    out[i].index = i;
    if (is_leaf(members[i].kind)) {
      out[i].leaf = kind_name(members[i].kind);
    } else {
      out[i].owned = canonical_key(members[i]);
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedKey & x, const RankedKey & y) {
    if (x.rank != y.rank) return x.rank < y.rank;
    const int c = x.view().compare(y.view());
    return c != 0 ? c < 0 : x.index < y.index;
  });
  return out;
}

}  // namespace

std::string canonical_key(const TsType & t)
{
  using K = TsType::Kind;
  switch (t.kind) {
    case K::Named: {
      std::string key = "N:" + t.name;
      if (!t.args.empty()) {
        key += "<";
        for (const auto & a : t.args) key += canonical_key(a) + ",";
        key += ">";
      }
      return key;
    }
    case K::Array:
      return "A[" + canonical_key(t.element()) + ((t.flags & TsType::kReadonlyArray) ? "]ro" : "]");
    case K::Callback: {
      std::string key = (t.flags & TsType::kConstructorType) ? "new F(" : "F(";
      for (const auto & p : t.fields) {
        if (p.rest) key += "...";
        key += canonical_key(p.type);
        if (p.optional) key += "?";
        key += ";";
      }
      return key + ")=>" + canonical_key(t.return_type());
    }
    case K::ObjectLiteral: {
      std::vector<std::string> parts;
      parts.reserve(t.fields.size());
      for (const auto & f : t.fields) {
        std::string part = f.name + (f.optional ? "?:" : ":") + canonical_key(f.type);
        if (f.modifiers & Field::kReadonly) part = "ro " + part;
        parts.push_back(std::move(part));
      }
      std::sort(parts.begin(), parts.end());
      std::string key = "O{";
      for (const auto & p : parts) key += p + ";";
      if (t.flags != TsType::kNone) key += "#" + std::to_string(t.flags);
      return key + "}";
    }
    case K::Union:
    case K::Intersection: {
      std::string key = t.is(K::Union) ? "U(" : "I(";
      key.reserve(8 * t.args.size() + 3);
      for (const auto & m : ranked_keys(t.args)) {
        key += m.view();
        key += t.is(K::Union) ? '|' : '&';
      }
      return key + ")";
    }
    case K::Tuple: {
      std::string key = "T[";
      for (const auto & m : t.args) key += canonical_key(m) + ",";
      return key + "]";
    }
    case K::Literal: return "L:" + t.name;
    case K::Opaque: return "Q:" + t.name;
    default: return std::string(kind_name(t.kind));
  }
}

bool equivalent(const TsType & a, const TsType & b) { return canonical_key(a) == canonical_key(b); }

bool canonical_less(const TsType & a, const TsType & b)
{
  const int ra = canonical_rank(a);
  const int rb = canonical_rank(b);
  if (ra != rb) return ra < rb;
  return canonical_key(a) < canonical_key(b);
}

TsType merge_object_literals(const TsType & a, const TsType & b)
{
  auto find = [](const TsType & shape, const std::string & name) -> const Field * {
    for (const auto & f : shape.fields) {
      if (f.name == name) return &f;
    }
    return nullptr;
  };

  std::vector<Field> merged;
  for (const auto & f : a.fields) {
    Field copy = f;
    if (const Field * other = find(b, f.name)) {
      copy.type = make_union({f.type, other->type}, ObjectMerge::Componentwise);
      copy.optional = f.optional || other->optional;
    } else {
      copy.optional = true;
    }
    merged.push_back(std::move(copy));
  }
  for (const auto & f : b.fields) {
    if (find(a, f.name)) continue;
    Field copy = f;
    copy.optional = true;
    merged.push_back(std::move(copy));
  }
  TsType out = TsType::object_literal(std::move(merged));
  out.flags = a.flags | b.flags;
  out.name = a.name.empty() ? b.name : a.name;
  return out;
}

TsType make_union(std::vector<TsType> members, ObjectMerge objects)
{
  std::vector<TsType> flat;
  if (std::none_of(members.begin(), members.end(), [](const TsType & m) { return m.is(TsType::Kind::Union); })) {
    flat = std::move(members);
  } else {
    for (auto & m : members) flatten_into(std::move(m), flat);
  }

  const bool has_shapes =
      std::any_of(flat.begin(), flat.end(), [](const TsType & m) { return m.is(TsType::Kind::ObjectLiteral); });
  if (objects == ObjectMerge::Componentwise && has_shapes) {
    std::vector<TsType> rest;
    std::vector<TsType> shapes;
    for (auto & m : flat) {
      (m.is(TsType::Kind::ObjectLiteral) ? shapes : rest).push_back(std::move(m));
    }
    if (!shapes.empty()) {
      TsType combined = shapes.front();
      for (std::size_t i = 1; i < shapes.size(); ++i) {
        combined = merge_object_literals(combined, shapes[i]);
      }
      rest.push_back(std::move(combined));
    }
    flat = std::move(rest);
  }

  // Sort on keys computed once per member, then drop equivalent neighbours.
  const auto order = ranked_keys(flat);
  std::vector<TsType> sorted;
  sorted.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && order[i].view() == order[i - 1].view()) continue;
    sorted.push_back(std::move(flat[order[i].index]));
  }
  if (sorted.size() == 1) return std::move(sorted.front());
  return TsType{TsType::Kind::Union, {}, std::move(sorted), {}, TsType::kNone};
}

std::vector<TsType> union_members(const TsType & t)
{
  if (t.is(TsType::Kind::Union)) return t.args;
  return {t};
}

bool contains_kind(const TsType & t, TsType::Kind kind)
{
  if (t.kind == kind) return true;
  if (!t.is(TsType::Kind::Union)) return false;
  return std::any_of(t.args.begin(), t.args.end(), [&](const TsType & m) { return m.kind == kind; });
}

TsType remove_members(const TsType & t, TsType::Kind kind)
{
  if (!t.is(TsType::Kind::Union)) {
    return t.kind == kind ? TsType{} : t;
  }
  std::vector<TsType> kept;
  for (const auto & m : t.args) {
    if (m.kind != kind) kept.push_back(m);
  }
  if (kept.empty()) return TsType{};
  return make_union(std::move(kept));
}

TsType canonicalize(const TsType & t)
{
  TsType out = t;
  for (auto & a : out.args) a = canonicalize(a);
  for (auto & f : out.fields) f.type = canonicalize(f.type);
  if (out.is(TsType::Kind::Union)) return make_union(std::move(out.args));
  if (out.is(TsType::Kind::Intersection)) {
    std::sort(out.args.begin(), out.args.end(), canonical_less);
  }
  return out;
}

bool is_identifier(std::string_view name)
{
  if (name.empty()) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_' || head == '$')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '$';
  });
}

std::string render_params(const std::vector<Field> & params)
{
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += render_field(params[i]);
  }
  return out;
}

std::string render(const TsType & t)
{
  using K = TsType::Kind;
  switch (t.kind) {
    case K::String: return "string";
    case K::Number: return "number";
    case K::Boolean: return "boolean";
    case K::Void: return "void";
    case K::Null: return "null";
    case K::Undefined: return "undefined";
    case K::Object: return "object";
    case K::Any: return "any";
    case K::Unknown: return "unknown";
    case K::Never: return "never";
    case K::Unspecified: return "";
    case K::Literal: return t.name;
    case K::Opaque: return t.name;
    case K::Named: {
      std::string out = t.name;
      if (!t.args.empty()) {
        out += "<";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          if (i) out += ", ";
          out += render(t.args[i]);
        }
        out += ">";
      }
      return out;
    }
    case K::Array: {
      std::string elem = render(t.element());
      if (needs_parens_as_element(t.element())) elem = "(" + elem + ")";
      return ((t.flags & TsType::kReadonlyArray) ? "readonly " : "") + elem + "[]";
    }
    case K::Callback:
      return ((t.flags & TsType::kConstructorType) ? "new (" : "(") + render_params(t.fields) +
             ") => " + render(t.return_type());
    case K::ObjectLiteral: {
      if (t.fields.empty()) return "{}";
      std::string out = "{ ";
      for (const auto & f : t.fields) out += render_field(f) + "; ";
      return out + "}";
    }
    case K::Union:
    case K::Intersection: {
      std::string out;
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += t.is(K::Union) ? " | " : " & ";
        std::string m = render(t.args[i]);
        const bool parens = t.is(K::Union) ? needs_parens_in_union(t.args[i])
                                           : (needs_parens_in_union(t.args[i]) ||
                                              t.args[i].is(K::Union));
        out += parens ? "(" + m + ")" : m;
      }
      return out;
    }
    case K::Tuple: {
      std::string out = "[";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += render(t.args[i]);
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace dtsgen
