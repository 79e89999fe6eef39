// Seeded generators for declaration modules, types and traces.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dtsgen/declaration.hpp"
#include "dtsgen/trace.hpp"

namespace dtsgen::testing_support
{

class Gen
{
public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int percent = 50) { return pick(100) < percent; }

  /// A type the generator could produce. `refs` are interface names in scope.
  TsType type(int depth, const std::vector<std::string> & refs, bool allow_void = false)
  {
    const int leaf_kinds = 7;
    const int kinds = depth > 0 ? leaf_kinds + 4 : leaf_kinds;
    switch (pick(kinds)) {
      case 0: return TsType::string();
      case 1: return TsType::number();
      case 2: return TsType::boolean();
      case 3: return allow_void ? TsType::void_type() : TsType::null();
      case 4: return coin() ? TsType::undefined() : TsType::object();
      case 5: return TsType::named(coin() ? "RegExp" : "Date");
      case 6: return refs.empty() ? TsType::string() : TsType::named(refs[static_cast<std::size_t>(pick(int(refs.size())))]);
      case 7: return TsType::array(type(depth - 1, refs));
      case 8: return TsType::callback(params(depth - 1, refs, 2), type(depth - 1, refs, true));
      case 9: {
        std::vector<Field> fields;
        const int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) {
          Field f{"k" + std::to_string(i), type(depth - 1, refs)};
          f.optional = coin(30);
          fields.push_back(std::move(f));
        }
        return TsType::object_literal(std::move(fields));
      }
      default: {
        std::vector<TsType> members;
        const int n = 2 + pick(2);
        for (int i = 0; i < n; ++i) members.push_back(type(depth - 1, refs));
        return make_union(std::move(members));
      }
    }
  }

  std::vector<Param> params(int depth, const std::vector<std::string> & refs, int max)
  {
    std::vector<Param> out;
    const int n = pick(max + 1);
    bool optional_tail = false;
    for (int i = 0; i < n; ++i) {
      Param p{"p" + std::to_string(i), type(depth, refs)};
      optional_tail = optional_tail || coin(20);
      p.optional = optional_tail;
      out.push_back(std::move(p));
    }
    return out;
  }

  Signature signature(const std::vector<std::string> & refs)
  {
    Signature s;
    s.params = params(2, refs, 3);
    s.return_type = type(2, refs, true);
    return s;
  }

  FunctionDecl function(const std::string & name, const std::vector<std::string> & refs)
  {
    FunctionDecl f;
    f.name = name;
    const int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) f.overloads.push_back(signature(refs));
    return f;
  }

  std::vector<InterfaceDecl> interfaces(int n)
  {
    static const std::vector<std::string> kNames{"a", "flag", "odd name", "with-dash", "it's", "x1"};
    std::vector<InterfaceDecl> out;
    for (int i = 0; i < n; ++i) {
      InterfaceDecl decl;
      decl.name = "I__" + std::to_string(i);
      std::vector<std::string> names = kNames;
      std::shuffle(names.begin(), names.end(), rng_);
      const int props = 1 + pick(4);
      for (int k = 0; k < props; ++k) {
        Field f{names[static_cast<std::size_t>(k)], type(2, {})};
        f.optional = coin(40);
        decl.properties.push_back(std::move(f));
      }
      out.push_back(std::move(decl));
    }
    return out;
  }

  DeclarationModule module()
  {
    DeclarationModule m;
    const int kind = pick(3);
    const int interface_count = pick(3);
    if (kind == 0) {
      std::vector<std::string> refs;
      m.scope.interfaces = interfaces(interface_count);
      for (const auto & i : m.scope.interfaces) refs.push_back(i.name);
      const int n = 1 + pick(4);
      for (int i = 0; i < n; ++i) m.scope.functions.push_back(function("fn" + std::to_string(i), refs));
      return m;
    }
    const std::string root = kind == 1 ? "Root" : "Thing";
    std::vector<std::string> refs;
    NamespaceDecl ns{root, {}};
    ns.body.interfaces = interfaces(interface_count);
    for (const auto & i : ns.body.interfaces) refs.push_back(root + "." + i.name);
    m.export_assignment = root;
    if (kind == 1) {
      m.template_kind = TemplateKind::ModuleFunction;
      m.scope.functions.push_back(function(root, refs));
    } else {
      m.template_kind = TemplateKind::ModuleClass;
      ClassDecl c;
      c.name = root;
      Signature ctor = signature(refs);
      ctor.return_type = TsType::unspecified();
      c.constructors.push_back(ctor);
      const int methods = pick(4);
      for (int i = 0; i < methods; ++i) c.methods.push_back(function("method" + std::to_string(i), refs));
      m.scope.classes.push_back(std::move(c));
      const int statics = pick(3);
      for (int i = 0; i < statics; ++i) ns.body.functions.push_back(function("make" + std::to_string(i), refs));
    }
    if (!ns.body.empty() || kind == 2) m.scope.namespaces.push_back(std::move(ns));
    m.feature_tags = tag_features(m);
    return m;
  }

  // -- traces ----------------------------------------------------------------

  RuntimeType runtime_type(int depth, int function_count)
  {
    switch (pick(depth > 0 ? 9 : 8)) {
      case 0: return {RuntimeType::Kind::String, ""};
      case 1: return {RuntimeType::Kind::Number, ""};
      case 2: return {RuntimeType::Kind::Boolean, ""};
      case 3: return {RuntimeType::Kind::Undefined, ""};
      case 4: return {RuntimeType::Kind::Null, ""};
      case 5: return {RuntimeType::Kind::Object, coin() ? "" : "RegExp"};
      case 6: return {RuntimeType::Kind::Array, ""};
      case 7:
        return {RuntimeType::Kind::Function, coin() ? "" : "functionId_" + std::to_string(1 + pick(function_count))};
      default: return {RuntimeType::Kind::Array, runtime_type(depth - 1, function_count).str()};
    }
  }

  Interaction interaction(int id, int function_count, int depth)
  {
    Interaction in;
    const int choice = pick(id < function_count ? 5 : 4);
    if (choice == 0 || choice == 4) {
      if (choice == 4) {
        in.code = Interaction::Code::MethodCall;
        in.method_name = "m" + std::to_string(pick(3));
        in.function_id = "functionId_" + std::to_string(id + 1 + pick(function_count - id));
      } else {
        in.code = Interaction::Code::GetField;
        in.field = "f" + std::to_string(pick(3));
        in.return_type_of = runtime_type(1, function_count);
      }
      if (depth > 0) {
        const int n = pick(3);
        for (int i = 0; i < n; ++i) in.following.push_back(interaction(id, function_count, depth - 1));
      }
    } else if (choice == 1) {
      in.code = Interaction::Code::UsedAsArgument;
      if (coin()) in.callee_function_id = "functionId_" + std::to_string(1 + pick(function_count));
    } else {
      in.code = choice == 2 ? Interaction::Code::BinaryOperation : Interaction::Code::UnaryOperation;
      in.operator_name = choice == 2 ? "+" : "typeof";
    }
    return in;
  }

  Trace trace()
  {
    Trace t;
    const int n = 1 + pick(4);
    for (int id = 1; id <= n; ++id) {
      FunctionContainer fn;
      fn.function_name = "fn" + std::to_string(id);
      fn.is_exported = coin();
      fn.is_constructor = coin(20);
      fn.is_instance_member = coin(20);
      fn.required_module = "mod";
      const int arity = pick(4);
      for (int i = 0; i < arity; ++i) {
        ArgumentContainer a;
        a.argument_name = "arg" + std::to_string(i);
        a.argument_index = i;
        const int k = pick(3);
        for (int j = 0; j < k; ++j) a.interactions.push_back(interaction(id, n, 2));
        fn.args[i] = std::move(a);
      }
      const int calls = pick(4);
      for (int c = 0; c < calls; ++c) {
        InvocationRecord r;
        for (int i = 0; i < arity; ++i) r.argument_types.push_back(runtime_type(2, n));
        r.return_type = runtime_type(2, n);
        fn.invocations.push_back(std::move(r));
      }
      t.functions["functionId_" + std::to_string(id)] = std::move(fn);
    }
    return t;
  }

private:
  std::mt19937 rng_;
};

}  // namespace dtsgen::testing_support
