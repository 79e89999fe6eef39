#include "dtsgen/declaration.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include <nlohmann/json.hpp>

namespace dtsgen
{

namespace
{

constexpr std::array<std::pair<FeatureTag, std::string_view>, 27> kTagNames{{
    {FeatureTag::TypeString, "type-string"},
    {FeatureTag::OptionalParameter, "optional-parameter"},
    {FeatureTag::TypeBoolean, "type-boolean"},
    {FeatureTag::TypeNumber, "type-number"},
    {FeatureTag::TypeVoid, "type-void"},
    {FeatureTag::TypeUnion, "type-union"},
    {FeatureTag::TypeFunction, "type-function"},
    {FeatureTag::TypeArray, "type-array"},
    {FeatureTag::TypeAny, "type-any"},
    {FeatureTag::TypeLiterals, "type-literals"},
    {FeatureTag::AliasType, "alias-type"},
    {FeatureTag::IndexSignature, "index-signature"},
    {FeatureTag::GenericsFunction, "generics-function"},
    {FeatureTag::DotDotDotToken, "dot-dot-dot-token"},
    {FeatureTag::CallSignature, "call-signature"},
    {FeatureTag::GenericsInterface, "generics-interface"},
    {FeatureTag::TypeObject, "type-object"},
    {FeatureTag::TypeUndefined, "type-undefined"},
    {FeatureTag::TypeIntersection, "type-intersection"},
    {FeatureTag::Readonly, "readonly"},
    {FeatureTag::TypeTuple, "type-tuple"},
    {FeatureTag::GenericsClass, "generics-class"},
    {FeatureTag::Static, "static"},
    {FeatureTag::Private, "private"},
    {FeatureTag::Public, "public"},
    {FeatureTag::Protected, "protected"},
    {FeatureTag::UnsupportedSyntax, "unsupported-syntax"},
}};

// ---------------------------------------------------------------------------
// Feature tagging

struct Tagger
{
  std::set<FeatureTag> tags;

  void modifiers(std::uint32_t m)
  {
    if (m & Field::kStatic) tags.insert(FeatureTag::Static);
    if (m & Field::kPrivate) tags.insert(FeatureTag::Private);
    if (m & Field::kPublic) tags.insert(FeatureTag::Public);
    if (m & Field::kProtected) tags.insert(FeatureTag::Protected);
    if (m & Field::kReadonly) tags.insert(FeatureTag::Readonly);
  }

  void param(const Field & p)
  {
    if (p.optional) tags.insert(FeatureTag::OptionalParameter);
    if (p.rest) tags.insert(FeatureTag::DotDotDotToken);
    modifiers(p.modifiers);
    type(p.type);
  }

  void type(const TsType & t)
  {
    using K = TsType::Kind;
    switch (t.kind) {
      case K::String: tags.insert(FeatureTag::TypeString); break;
      case K::Number: tags.insert(FeatureTag::TypeNumber); break;
      case K::Boolean: tags.insert(FeatureTag::TypeBoolean); break;
      case K::Void: tags.insert(FeatureTag::TypeVoid); break;
      case K::Union: tags.insert(FeatureTag::TypeUnion); break;
      case K::Callback: tags.insert(FeatureTag::TypeFunction); break;
      case K::Array: tags.insert(FeatureTag::TypeArray); break;
      case K::Any: tags.insert(FeatureTag::TypeAny); break;
      case K::Literal: tags.insert(FeatureTag::TypeLiterals); break;
      case K::Object: tags.insert(FeatureTag::TypeObject); break;
      case K::Undefined: tags.insert(FeatureTag::TypeUndefined); break;
      case K::Intersection: tags.insert(FeatureTag::TypeIntersection); break;
      case K::Tuple: tags.insert(FeatureTag::TypeTuple); break;
      default: break;
    }
    if (t.flags & TsType::kIndexSignature) tags.insert(FeatureTag::IndexSignature);
    if (t.flags & (TsType::kCallSignature | TsType::kConstructSignature)) {
      tags.insert(FeatureTag::CallSignature);
    }
    if (t.flags & TsType::kReadonlyArray) tags.insert(FeatureTag::Readonly);
    for (const auto & a : t.args) type(a);
    for (const auto & f : t.fields) param(f);
  }

  void signature(const Signature & s)
  {
    if (!s.type_params.empty()) tags.insert(FeatureTag::GenericsFunction);
    for (const auto & p : s.params) param(p);
    type(s.return_type);
  }

  void function(const FunctionDecl & f)
  {
    modifiers(f.modifiers);
    if (f.optional) tags.insert(FeatureTag::OptionalParameter);
    for (const auto & s : f.overloads) signature(s);
  }

  void scope(const Scope & s)
  {
    for (const auto & f : s.functions) function(f);
    for (const auto & c : s.classes) {
      if (!c.type_params.empty()) tags.insert(FeatureTag::GenericsClass);
      for (const auto & h : c.heritage) type(h);
      for (const auto & ctor : c.constructors) signature(ctor);
      for (const auto & m : c.methods) function(m);
      for (const auto & p : c.properties) param(p);
      for (const auto & ix : c.index_signatures) {
        tags.insert(FeatureTag::IndexSignature);
        param(ix);
      }
    }
    for (const auto & i : s.interfaces) {
      if (!i.type_params.empty()) tags.insert(FeatureTag::GenericsInterface);
      for (const auto & h : i.extends) type(h);
      for (const auto & p : i.properties) param(p);
      for (const auto & m : i.methods) function(m);
      for (const auto & cs : i.call_signatures) {
        tags.insert(FeatureTag::CallSignature);
        signature(cs);
      }
      for (const auto & cs : i.construct_signatures) {
        tags.insert(FeatureTag::CallSignature);
        signature(cs);
      }
      for (const auto & ix : i.index_signatures) {
        tags.insert(FeatureTag::IndexSignature);
        param(ix);
      }
    }
    for (const auto & a : s.aliases) {
      tags.insert(FeatureTag::AliasType);
      type(a.type);
    }
    for (const auto & v : s.variables) type(v.type);
    for (const auto & n : s.namespaces) scope(n.body);
  }
};

// ---------------------------------------------------------------------------
// Normalization

Signature normalize_signature(const Signature & s)
{
  Signature out = s;
  for (auto & p : out.params) p.type = canonicalize(p.type);
  out.return_type = canonicalize(out.return_type);
  return out;
}

void sort_overloads(std::vector<Signature> & sigs)
{
  std::stable_sort(sigs.begin(), sigs.end(), [](const Signature & a, const Signature & b) {
    return signature_key(a) < signature_key(b);
  });
}

FunctionDecl normalize_function(const FunctionDecl & f)
{
  FunctionDecl out = f;
  for (auto & s : out.overloads) s = normalize_signature(s);
  sort_overloads(out.overloads);
  return out;
}

std::vector<Field> normalize_fields(const std::vector<Field> & fields)
{
  std::vector<Field> out = fields;
  for (auto & f : out) f.type = canonicalize(f.type);
  std::stable_sort(out.begin(), out.end(),
                   [](const Field & a, const Field & b) { return a.name < b.name; });
  return out;
}

void sort_functions(std::vector<FunctionDecl> & fns)
{
  std::stable_sort(fns.begin(), fns.end(),
                   [](const FunctionDecl & a, const FunctionDecl & b) { return a.name < b.name; });
}

template <typename T>
void sort_by_name(std::vector<T> & items)
{
  std::stable_sort(items.begin(), items.end(),
                   [](const T & a, const T & b) { return a.name < b.name; });
}

Scope normalize_scope(const Scope & in)
{
  Scope out;
  for (const auto & f : in.functions) out.functions.push_back(normalize_function(f));
  sort_functions(out.functions);

  for (const auto & c : in.classes) {
    ClassDecl cls = c;
    cls.methods.clear();
    cls.properties.clear();
    for (const auto & m : c.methods) cls.methods.push_back(normalize_function(m));
    for (const auto & p : c.properties) {
      TsType t = canonicalize(p.type);
      if (t.is(TsType::Kind::Callback) && !(t.flags & TsType::kConstructorType)) {
        // `name: (a: A) => R` on a class is a method in disguise.
        Signature sig;
        sig.params = t.fields;
        sig.return_type = t.return_type();
        FunctionDecl method{p.name, {normalize_signature(sig)}, p.modifiers, p.optional};
        auto existing = std::find_if(cls.methods.begin(), cls.methods.end(),
                                     [&](const FunctionDecl & m) { return m.name == p.name; });
        if (existing != cls.methods.end()) {
          existing->overloads.push_back(method.overloads.front());
          sort_overloads(existing->overloads);
        } else {
          cls.methods.push_back(std::move(method));
        }
        continue;
      }
      Field copy = p;
      copy.type = std::move(t);
      cls.properties.push_back(std::move(copy));
    }
    for (auto & ctor : cls.constructors) ctor = normalize_signature(ctor);
    sort_overloads(cls.constructors);
    sort_functions(cls.methods);
    cls.properties = normalize_fields(cls.properties);
    cls.index_signatures = normalize_fields(cls.index_signatures);
    for (auto & h : cls.heritage) h = canonicalize(h);
    out.classes.push_back(std::move(cls));
  }
  sort_by_name(out.classes);

  for (const auto & i : in.interfaces) {
    InterfaceDecl iface = i;
    iface.properties = normalize_fields(i.properties);
    for (auto & m : iface.methods) m = normalize_function(m);
    sort_functions(iface.methods);
    for (auto & s : iface.call_signatures) s = normalize_signature(s);
    for (auto & s : iface.construct_signatures) s = normalize_signature(s);
    sort_overloads(iface.call_signatures);
    sort_overloads(iface.construct_signatures);
    iface.index_signatures = normalize_fields(i.index_signatures);
    for (auto & h : iface.extends) h = canonicalize(h);
    out.interfaces.push_back(std::move(iface));
  }
  sort_by_name(out.interfaces);

  for (const auto & a : in.aliases) {
    AliasDecl alias = a;
    alias.type = canonicalize(a.type);
    out.aliases.push_back(std::move(alias));
  }
  sort_by_name(out.aliases);

  for (const auto & v : in.variables) {
    VariableDecl var = v;
    var.type = canonicalize(v.type);
    out.variables.push_back(std::move(var));
  }
  sort_by_name(out.variables);

  for (const auto & n : in.namespaces) {
    Scope body = normalize_scope(n.body);
    if (body.empty()) continue;
    NamespaceDecl & target = out.namespace_named(n.name);
    if (target.body.empty()) {
      target.body = std::move(body);
    } else {
      // Re-opened namespace: concatenate and renormalize.
      Scope merged = target.body;
      auto append = [](auto & dst, const auto & src) { dst.insert(dst.end(), src.begin(), src.end()); };
      append(merged.functions, body.functions);
      append(merged.classes, body.classes);
      append(merged.interfaces, body.interfaces);
      append(merged.aliases, body.aliases);
      append(merged.variables, body.variables);
      append(merged.namespaces, body.namespaces);
      target.body = normalize_scope(merged);
    }
  }
  sort_by_name(out.namespaces);
  return out;
}

// ---------------------------------------------------------------------------
// Structural keys

std::string fields_key(const std::vector<Field> & fields)
{
  std::string key;
  for (const auto & f : fields) {
    key += f.name + (f.optional ? "?" : "") + ":" + canonical_key(f.type) + "/" +
           std::to_string(f.modifiers) + ";";
  }
  return key;
}

std::string function_key(const FunctionDecl & f)
{
  std::string key = "fn " + f.name + (f.optional ? "?" : "") + "/" + std::to_string(f.modifiers) + "{";
  for (const auto & s : f.overloads) key += signature_key(s) + ";";
  return key + "}";
}

std::string scope_key(const Scope & s)
{
  std::string key;
  for (const auto & f : s.functions) key += function_key(f);
  for (const auto & c : s.classes) {
    key += "class " + c.name + "<" + std::to_string(c.type_params.size()) + ">{";
    for (const auto & h : c.heritage) key += "h:" + canonical_key(h) + ";";
    for (const auto & ctor : c.constructors) key += "new" + signature_key(ctor) + ";";
    for (const auto & m : c.methods) key += function_key(m);
    key += "props:" + fields_key(c.properties) + "ix:" + fields_key(c.index_signatures) + "}";
  }
  for (const auto & i : s.interfaces) {
    key += "iface " + i.name + "<" + std::to_string(i.type_params.size()) + ">{";
    for (const auto & h : i.extends) key += "h:" + canonical_key(h) + ";";
    key += "props:" + fields_key(i.properties);
    for (const auto & m : i.methods) key += function_key(m);
    for (const auto & cs : i.call_signatures) key += "call" + signature_key(cs) + ";";
    for (const auto & cs : i.construct_signatures) key += "new" + signature_key(cs) + ";";
    key += "ix:" + fields_key(i.index_signatures) + "}";
  }
  for (const auto & a : s.aliases) {
    key += "type " + a.name + "<" + std::to_string(a.type_params.size()) + ">=" +
           canonical_key(a.type) + ";";
  }
  for (const auto & v : s.variables) {
    key += (v.is_const ? "const " : "var ") + v.name + ":" + canonical_key(v.type) + ";";
  }
  for (const auto & n : s.namespaces) key += "ns " + n.name + "{" + scope_key(n.body) + "}";
  return key;
}

// ---------------------------------------------------------------------------
// JSON

using ojson = nlohmann::ordered_json;

ojson modifiers_json(std::uint32_t m)
{
  ojson out = ojson::array();
  if (m & Field::kStatic) out.push_back("static");
  if (m & Field::kPrivate) out.push_back("private");
  if (m & Field::kPublic) out.push_back("public");
  if (m & Field::kProtected) out.push_back("protected");
  if (m & Field::kReadonly) out.push_back("readonly");
  if (m & Field::kAbstract) out.push_back("abstract");
  return out;
}

ojson type_json(const TsType & t);

ojson field_json(const Field & f)
{
  ojson out;
  out["name"] = f.name;
  out["type"] = type_json(f.type);
  out["optional"] = f.optional;
  if (f.rest) out["rest"] = true;
  if (f.modifiers != Field::kNoModifier) out["modifiers"] = modifiers_json(f.modifiers);
  return out;
}

ojson type_json(const TsType & t)
{
  ojson out;
  out["kind"] = kind_name(t.kind);
  out["text"] = render(t);
  if (!t.name.empty()) out["name"] = t.name;
  if (!t.args.empty()) {
    ojson args = ojson::array();
    for (const auto & a : t.args) args.push_back(type_json(a));
    out["args"] = std::move(args);
  }
  if (!t.fields.empty()) {
    ojson fields = ojson::array();
    for (const auto & f : t.fields) fields.push_back(field_json(f));
    out["fields"] = std::move(fields);
  }
  return out;
}

ojson signature_json(const Signature & s)
{
  ojson out;
  if (!s.type_params.empty()) out["typeParameters"] = s.type_params;
  ojson params = ojson::array();
  for (const auto & p : s.params) params.push_back(field_json(p));
  out["parameters"] = std::move(params);
  out["returnType"] = type_json(s.return_type);
  return out;
}

ojson function_json(const FunctionDecl & f)
{
  ojson out;
  out["name"] = f.name;
  if (f.optional) out["optional"] = true;
  if (f.modifiers != Field::kNoModifier) out["modifiers"] = modifiers_json(f.modifiers);
  ojson overloads = ojson::array();
  for (const auto & s : f.overloads) overloads.push_back(signature_json(s));
  out["overloads"] = std::move(overloads);
  return out;
}

template <typename T, typename F>
ojson list_json(const std::vector<T> & items, F && fn)
{
  ojson out = ojson::array();
  for (const auto & item : items) out.push_back(fn(item));
  return out;
}

ojson scope_json(const Scope & s)
{
  ojson out;
  out["functions"] = list_json(s.functions, function_json);
  out["classes"] = list_json(s.classes, [](const ClassDecl & c) {
    ojson cls;
    cls["name"] = c.name;
    if (!c.type_params.empty()) cls["typeParameters"] = c.type_params;
    cls["constructors"] = list_json(c.constructors, signature_json);
    cls["methods"] = list_json(c.methods, function_json);
    cls["properties"] = list_json(c.properties, field_json);
    if (!c.index_signatures.empty()) cls["indexSignatures"] = list_json(c.index_signatures, field_json);
    return cls;
  });
  out["interfaces"] = list_json(s.interfaces, [](const InterfaceDecl & i) {
    ojson iface;
    iface["name"] = i.name;
    if (!i.type_params.empty()) iface["typeParameters"] = i.type_params;
    iface["properties"] = list_json(i.properties, field_json);
    iface["methods"] = list_json(i.methods, function_json);
    if (!i.call_signatures.empty()) iface["callSignatures"] = list_json(i.call_signatures, signature_json);
    if (!i.construct_signatures.empty()) {
      iface["constructSignatures"] = list_json(i.construct_signatures, signature_json);
    }
    if (!i.index_signatures.empty()) iface["indexSignatures"] = list_json(i.index_signatures, field_json);
    return iface;
  });
  out["aliases"] = list_json(s.aliases, [](const AliasDecl & a) {
    ojson alias;
    alias["name"] = a.name;
    if (!a.type_params.empty()) alias["typeParameters"] = a.type_params;
    alias["type"] = type_json(a.type);
    return alias;
  });
  out["variables"] = list_json(s.variables, [](const VariableDecl & v) {
    ojson var;
    var["name"] = v.name;
    var["const"] = v.is_const;
    var["type"] = type_json(v.type);
    return var;
  });
  out["namespaces"] = list_json(s.namespaces, [](const NamespaceDecl & n) {
    ojson ns;
    ns["name"] = n.name;
    ns.update(scope_json(n.body));
    return ns;
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view template_name(TemplateKind kind)
{
  switch (kind) {
    case TemplateKind::Module: return "module";
    case TemplateKind::ModuleClass: return "module-class";
    case TemplateKind::ModuleFunction: return "module-function";
  }
  return "module";
}

std::optional<TemplateKind> template_from_name(std::string_view name)
{
  if (name == "module") return TemplateKind::Module;
  if (name == "module-class") return TemplateKind::ModuleClass;
  if (name == "module-function") return TemplateKind::ModuleFunction;
  return std::nullopt;
}

std::string_view tag_name(FeatureTag tag)
{
  for (const auto & [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "unsupported-syntax";
}

std::optional<FeatureTag> tag_from_name(std::string_view name)
{
  for (const auto & [t, n] : kTagNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

const std::vector<FeatureTag> & all_feature_tags()
{
  static const std::vector<FeatureTag> tags = [] {
    std::vector<FeatureTag> out;
    for (const auto & [t, name] : kTagNames) out.push_back(t);
    return out;
  }();
  return tags;
}

bool is_unimplemented(FeatureTag tag)
{
  switch (tag) {
    case FeatureTag::TypeString:
    case FeatureTag::OptionalParameter:
    case FeatureTag::TypeBoolean:
    case FeatureTag::TypeNumber:
    case FeatureTag::TypeVoid:
    case FeatureTag::TypeUnion:
    case FeatureTag::TypeFunction:
    case FeatureTag::TypeArray:
    case FeatureTag::AliasType:
    case FeatureTag::TypeObject:
    case FeatureTag::TypeUndefined:
      return false;
    default:
      return true;
  }
}

bool Scope::empty() const
{
  return functions.empty() && classes.empty() && interfaces.empty() && aliases.empty() &&
         variables.empty() &&
         std::all_of(namespaces.begin(), namespaces.end(),
                     [](const NamespaceDecl & n) { return n.body.empty(); });
}

const FunctionDecl * Scope::find_function(std::string_view name) const
{
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const FunctionDecl & f) { return f.name == name; });
  return it == functions.end() ? nullptr : &*it;
}

const ClassDecl * Scope::find_class(std::string_view name) const
{
  auto it = std::find_if(classes.begin(), classes.end(),
                         [&](const ClassDecl & c) { return c.name == name; });
  return it == classes.end() ? nullptr : &*it;
}

const InterfaceDecl * Scope::find_interface(std::string_view name) const
{
  auto it = std::find_if(interfaces.begin(), interfaces.end(),
                         [&](const InterfaceDecl & i) { return i.name == name; });
  return it == interfaces.end() ? nullptr : &*it;
}

const NamespaceDecl * Scope::find_namespace(std::string_view name) const
{
  auto it = std::find_if(namespaces.begin(), namespaces.end(),
                         [&](const NamespaceDecl & n) { return n.name == name; });
  return it == namespaces.end() ? nullptr : &*it;
}

const AliasDecl * Scope::find_alias(std::string_view name) const
{
  auto it = std::find_if(aliases.begin(), aliases.end(),
                         [&](const AliasDecl & a) { return a.name == name; });
  return it == aliases.end() ? nullptr : &*it;
}

NamespaceDecl & Scope::namespace_named(const std::string & name)
{
  auto it = std::find_if(namespaces.begin(), namespaces.end(),
                         [&](const NamespaceDecl & n) { return n.name == name; });
  if (it != namespaces.end()) return *it;
  namespaces.push_back(NamespaceDecl{name, {}});
  return namespaces.back();
}

std::set<FeatureTag> tag_features(const DeclarationModule & module)
{
  Tagger tagger;
  tagger.scope(module.scope);
  if (!module.unsupported.empty()) tagger.tags.insert(FeatureTag::UnsupportedSyntax);
  return std::move(tagger.tags);
}

DeclarationModule normalize(const DeclarationModule & module)
{
  DeclarationModule out;
  out.module_name = module.module_name;
  out.template_kind = module.template_kind;
  out.export_assignment = module.export_assignment;
  out.scope = normalize_scope(module.scope);
  out.unsupported = module.unsupported;
  std::sort(out.unsupported.begin(), out.unsupported.end());
  out.feature_tags = tag_features(out);
  out.feature_tags.insert(module.feature_tags.begin(), module.feature_tags.end());
  return out;
}

std::string signature_key(const Signature & sig)
{
  std::string key = "<" + std::to_string(sig.type_params.size()) + ">(";
  for (const auto & p : sig.params) {
    if (p.rest) key += "...";
    key += canonical_key(p.type);
    if (p.optional) key += "?";
    key += ",";
  }
  return key + ")=>" + canonical_key(sig.return_type);
}

bool equivalent(const DeclarationModule & a, const DeclarationModule & b)
{
  const DeclarationModule na = normalize(a);
  const DeclarationModule nb = normalize(b);
  return na.template_kind == nb.template_kind && na.export_assignment == nb.export_assignment &&
         na.unsupported == nb.unsupported && scope_key(na.scope) == scope_key(nb.scope);
}

std::string to_json(const DeclarationModule & module, int indent)
{
  ojson out;
  out["module"] = module.module_name;
  out["template"] = template_name(module.template_kind);
  out["exportAssignment"] =
      module.export_assignment ? ojson(*module.export_assignment) : ojson(nullptr);
  out.update(scope_json(module.scope));
  ojson tags = ojson::array();
  for (auto tag : module.feature_tags) tags.push_back(tag_name(tag));
  out["tags"] = std::move(tags);
  if (!module.unsupported.empty()) out["unsupported"] = module.unsupported;
  return out.dump(indent);
}

}  // namespace dtsgen
