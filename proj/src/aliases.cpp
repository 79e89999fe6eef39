#include <algorithm>
#include <map>
#include <set>

#include "dtsgen/parser.hpp"

namespace dtsgen
{

namespace
{

struct AliasEntry
{
  const AliasDecl * decl = nullptr;
  std::string prefix;  // enclosing namespace path, `A.B.` form
};

class Expander
{
public:
  explicit Expander(const DeclarationModule & m) { collect(m.scope, ""); }

  void apply(Scope & scope, const std::string & prefix)
  {
    for (auto & f : scope.functions) function(f, prefix);
    for (auto & c : scope.classes) {
      for (auto & h : c.heritage) h = expand(h, prefix);
      for (auto & s : c.constructors) signature(s, prefix);
      for (auto & m : c.methods) function(m, prefix);
      for (auto & p : c.properties) p.type = expand(p.type, prefix);
      for (auto & ix : c.index_signatures) ix.type = expand(ix.type, prefix);
    }
    for (auto & i : scope.interfaces) {
      for (auto & h : i.extends) h = expand(h, prefix);
      for (auto & p : i.properties) p.type = expand(p.type, prefix);
      for (auto & m : i.methods) function(m, prefix);
      for (auto & s : i.call_signatures) signature(s, prefix);
      for (auto & s : i.construct_signatures) signature(s, prefix);
      for (auto & ix : i.index_signatures) ix.type = expand(ix.type, prefix);
    }
    for (auto & v : scope.variables) v.type = expand(v.type, prefix);
    scope.aliases.clear();
    for (auto & n : scope.namespaces) apply(n.body, prefix + n.name + ".");
  }

private:
  void collect(const Scope & scope, const std::string & prefix)
  {
    for (const auto & a : scope.aliases) aliases_[prefix + a.name] = AliasEntry{&a, prefix};
    for (const auto & i : scope.interfaces) declared_.insert(prefix + i.name);
    for (const auto & c : scope.classes) declared_.insert(prefix + c.name);
    for (const auto & f : scope.functions) declared_.insert(prefix + f.name);
    for (const auto & v : scope.variables) declared_.insert(prefix + v.name);
    for (const auto & n : scope.namespaces) {
      namespaces_.insert(prefix + n.name);
      declared_.insert(prefix + n.name);
      collect(n.body, prefix + n.name + ".");
    }
  }

  /// Looks a reference up from the innermost enclosing namespace outwards.
  template <typename Table>
  static auto lookup(const Table & table, const std::string & name, std::string prefix)
  {
    while (true) {
      if (auto it = table.find(prefix + name); it != table.end()) return it;
      if (prefix.empty()) break;
      prefix.pop_back();
      const auto dot = prefix.rfind('.');
      prefix = dot == std::string::npos ? std::string{} : prefix.substr(0, dot + 1);
    }
    // A hoisted `export =` namespace leaves references qualified by its old name.
    if (const auto dot = name.find('.'); dot != std::string::npos) {
      if (auto it = table.find(name.substr(dot + 1)); it != table.end()) return it;
    }
    return table.end();
  }

  void function(FunctionDecl & f, const std::string & prefix)
  {
    for (auto & s : f.overloads) signature(s, prefix);
  }

  void signature(Signature & s, const std::string & prefix)
  {
    for (auto & p : s.params) p.type = expand(p.type, prefix);
    s.return_type = expand(s.return_type, prefix);
  }

  static TsType substitute(const TsType & t, const std::map<std::string, TsType> & bindings)
  {
    if (t.is(TsType::Kind::Named) && t.args.empty()) {
      if (auto it = bindings.find(t.name); it != bindings.end()) return it->second;
    }
    TsType out = t;
    for (auto & a : out.args) a = substitute(a, bindings);
    for (auto & f : out.fields) f.type = substitute(f.type, bindings);
    return out;
  }

  TsType expand(const TsType & t, const std::string & prefix)
  {
    TsType out = t;
    for (auto & a : out.args) a = expand(a, prefix);
    for (auto & f : out.fields) f.type = expand(f.type, prefix);
    if (!out.is(TsType::Kind::Named)) return out;

    auto it = lookup(aliases_, out.name, prefix);
    if (it == aliases_.end()) {
      check_resolved(out.name, prefix);
      return out;
    }
    const std::string & key = it->first;
    if (std::find(stack_.begin(), stack_.end(), key) != stack_.end()) {
      throw ParseError("cyclic type alias '" + key + "'", 0, 0);
    }
    const AliasDecl & alias = *it->second.decl;
    std::map<std::string, TsType> bindings;
    for (std::size_t i = 0; i < alias.type_params.size(); ++i) {
      bindings[alias.type_params[i]] =
          i < out.args.size() ? out.args[i] : TsType{TsType::Kind::Unknown, {}, {}, {}, TsType::kNone};
    }
    stack_.push_back(key);
    TsType expanded = expand(substitute(alias.type, bindings), it->second.prefix);
    stack_.pop_back();
    return expanded;
  }

  /// A qualified reference into a namespace declared in this file must resolve.
  void check_resolved(const std::string & name, const std::string & prefix) const
  {
    const auto dot = name.rfind('.');
    if (dot == std::string::npos) return;
    const std::string ns = name.substr(0, dot);
    if (lookup(namespaces_, ns, prefix) == namespaces_.end()) return;
    if (lookup(declared_, name, prefix) == declared_.end()) {
      throw ParseError("unresolved reference '" + name + "'", 0, 0);
    }
  }

  std::map<std::string, AliasEntry> aliases_;
  std::set<std::string> declared_;
  std::set<std::string> namespaces_;
  std::vector<std::string> stack_;
};

}  // namespace

DeclarationModule expand_aliases(const DeclarationModule & module)
{
  DeclarationModule out = module;
  Expander expander(module);
  expander.apply(out.scope, "");
  return out;
}

}  // namespace dtsgen
