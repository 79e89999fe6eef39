#include "dtsgen/compare.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <nlohmann/json.hpp>

#include "dtsgen/parser.hpp"

namespace dtsgen
{

namespace
{

constexpr int kMaxResolveDepth = 4;

/// Interface lookup for one module; named references resolve to object literals.
class Resolver
{
public:
  explicit Resolver(const Scope & scope) { collect(scope, ""); }

  TsType resolve(const TsType & t, const std::string & prefix, int depth = 0) const
  {
    TsType out = t;
    if (depth > kMaxResolveDepth) return out;
    if (out.is(TsType::Kind::Named) && out.args.empty()) {
      if (const InterfaceDecl * decl = find(out.name, prefix)) return resolve(literal_of(*decl), prefix, depth + 1);
      return out;
    }
    for (auto & a : out.args) a = resolve(a, prefix, depth);
    for (auto & f : out.fields) f.type = resolve(f.type, prefix, depth);
    if (out.is(TsType::Kind::Union)) return make_union(std::move(out.args));
    return out;
  }

  const InterfaceDecl * find(const std::string & name, std::string prefix) const
  {
    while (true) {
      if (auto it = interfaces_.find(prefix + name); it != interfaces_.end()) return it->second;
      if (prefix.empty()) break;
      prefix.pop_back();
      const auto dot = prefix.rfind('.');
      prefix = dot == std::string::npos ? std::string{} : prefix.substr(0, dot + 1);
    }
    if (const auto dot = name.find('.'); dot != std::string::npos) {
      if (auto it = interfaces_.find(name.substr(dot + 1)); it != interfaces_.end()) return it->second;
    }
    return nullptr;
  }

private:
  void collect(const Scope & scope, const std::string & prefix)
  {
    for (const auto & i : scope.interfaces) interfaces_[prefix + i.name] = &i;
    for (const auto & n : scope.namespaces) collect(n.body, prefix + n.name + ".");
  }

  static TsType literal_of(const InterfaceDecl & i)
  {
    TsType shape = TsType::object_literal(i.properties);
    for (const auto & m : i.methods) {
      for (const auto & s : m.overloads) {
        Field f;
        f.name = m.name;
        f.optional = m.optional;
        f.type = TsType::callback(s.params, s.return_type);
        shape.fields.push_back(std::move(f));
      }
    }
    for (const auto & s : i.call_signatures) {
      shape.fields.push_back(Field{"()", TsType::callback(s.params, s.return_type), false, false, 0});
      shape.flags |= TsType::kCallSignature;
    }
    for (const auto & s : i.construct_signatures) {
      shape.fields.push_back(Field{"new()", TsType::callback(s.params, s.return_type), false, false, 0});
      shape.flags |= TsType::kConstructSignature;
    }
    for (const auto & ix : i.index_signatures) {
      Field f = ix;
      f.name = "[" + ix.name + ": string]";
      shape.fields.push_back(std::move(f));
      shape.flags |= TsType::kIndexSignature;
    }
    shape.name = i.name;
    return shape;
  }

  std::map<std::string, const InterfaceDecl *> interfaces_;
};

std::string fold_identifier(std::string_view name)
{
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || c == '.') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string render_slot(const TypedSlot & s)
{
  std::string text = render(s.type);
  return s.optional ? text + " (optional)" : text;
}

std::string render_function(const FunctionDecl & f)
{
  std::string out;
  for (const auto & s : f.overloads) {
    if (!out.empty()) out += "; ";
    out += f.name + "(" + render_params(s.params) + ")";
    if (!s.return_type.is(TsType::Kind::Unspecified)) out += ": " + render(s.return_type);
  }
  return out;
}

const Field * field_named(const TsType & shape, const std::string & name)
{
  for (const auto & f : shape.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool shape_solvable(const TsType & expected, const TsType & actual);

bool member_covered(const TsType & member, const std::vector<TsType> & expected_members)
{
  for (const auto & e : expected_members) {
    if (e.is(TsType::Kind::Any) || equivalent(e, member)) return true;
    if (e.is(TsType::Kind::ObjectLiteral) && member.is(TsType::Kind::ObjectLiteral) && shape_solvable(e, member)) {
      return true;
    }
    // Nothing observed on the value yet: accessing fields would reveal the shape.
    if (member.is(TsType::Kind::Object) && (e.is(TsType::Kind::ObjectLiteral) || e.is(TsType::Kind::Named))) {
      return true;
    }
  }
  return false;
}

bool shape_solvable(const TsType & expected, const TsType & actual)
{
  for (const auto & af : actual.fields) {
    const Field * ef = field_named(expected, af.name);
    if (!ef) return false;
    if (classify_type_difference({ef->type, ef->optional}, {af.type, af.optional}) != Solvability::Solvable) {
      return false;
    }
  }
  return true;
}

class Comparator
{
public:
  Comparator(const DeclarationModule & e, const DeclarationModule & a) : e_(e), a_(a), er_(e.scope), ar_(a.scope) {}

  std::vector<Difference> run()
  {
    if (e_.template_kind != a_.template_kind) {
      add(DifferenceKind::TemplateDifference, e_.module_name, std::string(template_name(e_.template_kind)),
          std::string(template_name(a_.template_kind)));
      return std::move(out_);
    }

    Scope e_rest = e_.scope;
    Scope a_rest = a_.scope;
    std::string root;
    if (e_.export_assignment && a_.export_assignment) {
      const std::string & en = *e_.export_assignment;
      const std::string & an = *a_.export_assignment;
      root = an;
      if (fold_identifier(en) != fold_identifier(an)) {
        add(DifferenceKind::ExportAssignmentDifference, "export =", en, an);
      }
      if (e_.template_kind == TemplateKind::ModuleFunction) {
        const FunctionDecl ef = take_function(e_rest, en);
        const FunctionDecl af = take_function(a_rest, an);
        function(an, ef, af, "", "");
      } else if (e_.template_kind == TemplateKind::ModuleClass) {
        const ClassDecl ec = take_class(e_rest, en);
        const ClassDecl ac = take_class(a_rest, an);
        klass(an, ec, ac, "", "");
      }
      const Scope ens = take_namespace(e_rest, en);
      const Scope ans = take_namespace(a_rest, an);
      scope(an + ".", ens, ans, en + ".", an + ".");
    }
    scope("", e_rest, a_rest, "", "");
    return std::move(out_);
  }

private:
  void add(DifferenceKind kind, std::string path, std::string expected, std::string actual,
           Solvability s = Solvability::NotApplicable)
  {
    out_.push_back(Difference{kind, std::move(path), std::move(expected), std::move(actual), s});
  }

  static FunctionDecl take_function(Scope & s, const std::string & name)
  {
    auto it = std::find_if(s.functions.begin(), s.functions.end(), [&](const FunctionDecl & f) { return f.name == name; });
    if (it == s.functions.end()) return FunctionDecl{name, {}, 0, false};
    FunctionDecl f = std::move(*it);
    s.functions.erase(it);
    return f;
  }

  static ClassDecl take_class(Scope & s, const std::string & name)
  {
    auto it = std::find_if(s.classes.begin(), s.classes.end(), [&](const ClassDecl & c) { return c.name == name; });
    if (it == s.classes.end()) return ClassDecl{name, {}, {}, {}, {}, {}, {}};
    ClassDecl c = std::move(*it);
    s.classes.erase(it);
    return c;
  }

  static Scope take_namespace(Scope & s, const std::string & name)
  {
    auto it = std::find_if(s.namespaces.begin(), s.namespaces.end(),
                           [&](const NamespaceDecl & n) { return n.name == name; });
    if (it == s.namespaces.end()) return {};
    Scope body = std::move(it->body);
    s.namespaces.erase(it);
    return body;
  }

  template <typename T, typename Fn>
  static void match_by_name(const std::vector<T> & expected, const std::vector<T> & actual, Fn && fn)
  {
    for (const auto & e : expected) {
      auto it = std::find_if(actual.begin(), actual.end(), [&](const T & a) { return a.name == e.name; });
      fn(&e, it == actual.end() ? nullptr : &*it);
    }
    for (const auto & a : actual) {
      auto it = std::find_if(expected.begin(), expected.end(), [&](const T & e) { return e.name == a.name; });
      if (it == expected.end()) fn(nullptr, &a);
    }
  }

  void scope(const std::string & path, const Scope & es, const Scope & as, const std::string & ep,
             const std::string & ap)
  {
    match_by_name(es.functions, as.functions, [&](const FunctionDecl * e, const FunctionDecl * a) {
      if (!a) {
        add(DifferenceKind::FunctionMissingDifference, path + e->name, render_function(*e), "");
      } else if (!e) {
        add(DifferenceKind::FunctionExtraDifference, path + a->name, "", render_function(*a));
      } else {
        function(path + a->name, *e, *a, ep, ap);
      }
    });
    match_by_name(es.classes, as.classes, [&](const ClassDecl * e, const ClassDecl * a) {
      if (!a) {
        add(DifferenceKind::FunctionMissingDifference, path + e->name, "class " + e->name, "");
      } else if (!e) {
        add(DifferenceKind::FunctionExtraDifference, path + a->name, "", "class " + a->name);
      } else {
        klass(path + a->name, *e, *a, ep, ap);
      }
    });
    match_by_name(es.namespaces, as.namespaces, [&](const NamespaceDecl * e, const NamespaceDecl * a) {
      static const Scope empty;
      const std::string name = a ? a->name : e->name;
      scope(path + name + ".", e ? e->body : empty, a ? a->body : empty, ep + name + ".", ap + name + ".");
    });
  }

  void klass(const std::string & path, const ClassDecl & e, const ClassDecl & a, const std::string & ep,
             const std::string & ap)
  {
    function(path + ".constructor", FunctionDecl{"constructor", e.constructors, 0, false},
             FunctionDecl{"constructor", a.constructors, 0, false}, ep, ap);
    match_by_name(e.methods, a.methods, [&](const FunctionDecl * em, const FunctionDecl * am) {
      const std::string name = path + ".prototype." + (am ? am->name : em->name);
      if (!am) {
        add(DifferenceKind::FunctionMissingDifference, name, render_function(*em), "");
      } else if (!em) {
        add(DifferenceKind::FunctionExtraDifference, name, "", render_function(*am));
      } else {
        function(name, *em, *am, ep, ap);
      }
    });
  }

  void function(const std::string & path, const FunctionDecl & e, const FunctionDecl & a, const std::string & ep,
                const std::string & ap)
  {
    if (e.overloads.size() != a.overloads.size()) {
      add(DifferenceKind::FunctionOverloadingDifference, path, std::to_string(e.overloads.size()),
          std::to_string(a.overloads.size()));
      return;
    }
    for (std::size_t k = 0; k < e.overloads.size(); ++k) {
      params(path, e.overloads[k].params, a.overloads[k].params, ep, ap);
    }
  }

  void params(const std::string & path, const std::vector<Param> & e, const std::vector<Param> & a,
              const std::string & ep, const std::string & ap)
  {
    for (std::size_t i = 0; i < std::max(e.size(), a.size()); ++i) {
      if (i >= a.size()) {
        add(DifferenceKind::ParameterMissingDifference, path + "." + e[i].name, render_slot({e[i].type, e[i].optional}),
            "");
      } else if (i >= e.size()) {
        add(DifferenceKind::ParameterExtraDifference, path + "." + a[i].name, "", render_slot({a[i].type, a[i].optional}));
      } else {
        slot(path + "." + a[i].name, {e[i].type, e[i].optional}, {a[i].type, a[i].optional}, ep, ap);
      }
    }
  }

  void slot(const std::string & path, const TypedSlot & e, const TypedSlot & a, const std::string & ep,
            const std::string & ap)
  {
    const TypedSlot er{er_.resolve(e.type, ep), e.optional};
    const TypedSlot ar{ar_.resolve(a.type, ap), a.optional};

    if (er.type.is(TsType::Kind::ObjectLiteral) && ar.type.is(TsType::Kind::ObjectLiteral)) {
      if (er.optional != ar.optional) {
        add(DifferenceKind::ParameterTypeDifference, path, render_slot(e), render_slot(a),
            classify_type_difference({er.type, er.optional}, {er.type, ar.optional}));
      }
      // Properties are reported under the interface name when the actual side names one.
      const std::string base = a.type.is(TsType::Kind::Named) ? a.type.name : path;
      properties(base, er.type, ar.type);
      return;
    }
    if (er.optional == ar.optional && equivalent(er.type, ar.type)) return;
    add(DifferenceKind::ParameterTypeDifference, path, render_slot(e), render_slot(a),
        classify_type_difference(er, ar));
  }

  void properties(const std::string & base, const TsType & e, const TsType & a)
  {
    for (const auto & ef : e.fields) {
      const Field * af = field_named(a, ef.name);
      if (!af) {
        add(DifferenceKind::ParameterMissingDifference, base + "." + ef.name, render_slot({ef.type, ef.optional}), "");
      }
    }
    for (const auto & af : a.fields) {
      const Field * ef = field_named(e, af.name);
      if (!ef) {
        add(DifferenceKind::ParameterExtraDifference, base + "." + af.name, "", render_slot({af.type, af.optional}));
        continue;
      }
      const TypedSlot es{ef->type, ef->optional};
      const TypedSlot as{af.type, af.optional};
      if (es.type.is(TsType::Kind::ObjectLiteral) && as.type.is(TsType::Kind::ObjectLiteral)) {
        if (es.optional != as.optional) {
          add(DifferenceKind::ParameterTypeDifference, base + "." + af.name, render_slot(es), render_slot(as),
              classify_type_difference({es.type, es.optional}, {es.type, as.optional}));
        }
        properties(base + "." + af.name, es.type, as.type);
      } else if (es.optional != as.optional || !equivalent(es.type, as.type)) {
        add(DifferenceKind::ParameterTypeDifference, base + "." + af.name, render_slot(es), render_slot(as),
            classify_type_difference(es, as));
      }
    }
  }

  const DeclarationModule & e_;
  const DeclarationModule & a_;
  Resolver er_;
  Resolver ar_;
  std::vector<Difference> out_;
};

DeclarationModule prepare(const DeclarationModule & m)
{
  DeclarationModule expanded;
  try {
    expanded = expand_aliases(m);
  } catch (const ParseError & e) {
    throw CompareError(e.what());
  }
  return normalize(expanded);
}

}  // namespace

std::string_view kind_name(DifferenceKind kind)
{
  switch (kind) {
    case DifferenceKind::TemplateDifference: return "TemplateDifference";
    case DifferenceKind::ExportAssignmentDifference: return "ExportAssignmentDifference";
    case DifferenceKind::FunctionMissingDifference: return "FunctionMissingDifference";
    case DifferenceKind::FunctionExtraDifference: return "FunctionExtraDifference";
    case DifferenceKind::FunctionOverloadingDifference: return "FunctionOverloadingDifference";
    case DifferenceKind::ParameterMissingDifference: return "ParameterMissingDifference";
    case DifferenceKind::ParameterExtraDifference: return "ParameterExtraDifference";
    case DifferenceKind::ParameterTypeDifference: return "ParameterTypeDifference";
  }
  return "TemplateDifference";
}

std::string_view solvability_name(Solvability s)
{
  switch (s) {
    case Solvability::Solvable: return "solvable";
    case Solvability::Unsolvable: return "unsolvable";
    case Solvability::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

Solvability classify_type_difference(const TypedSlot & expected, const TypedSlot & actual)
{
  if (actual.optional && !expected.optional) return Solvability::Unsolvable;
  if (equivalent(expected.type, actual.type)) return Solvability::Solvable;
  const std::vector<TsType> expected_members = union_members(expected.type);
  for (const auto & m : union_members(actual.type)) {
    if (!member_covered(m, expected_members)) return Solvability::Unsolvable;
  }
  return Solvability::Solvable;
}

ComparisonReport compare(const DeclarationModule & expected, const DeclarationModule & actual,
                         const std::string & module_name)
{
  const DeclarationModule e = prepare(expected);
  const DeclarationModule a = prepare(actual);

  ComparisonReport report;
  report.module = module_name;
  report.template_kind = e.template_kind;
  report.tags = e.feature_tags;
  report.tags.insert(a.feature_tags.begin(), a.feature_tags.end());

  DeclarationModule named_e = e;
  named_e.module_name = module_name;
  report.differences = Comparator(named_e, a).run();
  return report;
}

std::string report_json(const ComparisonReport & report)
{
  nlohmann::ordered_json j;
  j["module"] = report.module;
  j["template"] = std::string(template_name(report.template_kind));
  j["differences"] = nlohmann::ordered_json::array();
  for (const auto & d : report.differences) {
    nlohmann::ordered_json item;
    item["kind"] = std::string(kind_name(d.kind));
    item["path"] = d.path;
    item["expected"] = d.expected;
    item["actual"] = d.actual;
    item["solvability"] = std::string(solvability_name(d.solvability));
    j["differences"].push_back(std::move(item));
  }
  j["tags"] = nlohmann::ordered_json::array();
  for (const auto & t : all_feature_tags()) {
    if (report.tags.contains(t)) j["tags"].push_back(std::string(tag_name(t)));
  }
  return j.dump(4) + "\n";
}

std::vector<FeatureTag> unimplemented_tags(const DeclarationModule & module)
{
  std::vector<FeatureTag> out;
  for (const auto & t : all_feature_tags()) {
    if (module.feature_tags.contains(t) && is_unimplemented(t)) out.push_back(t);
  }
  return out;
}

bool filtered_out(const DeclarationModule & module) { return !unimplemented_tags(module).empty(); }

}  // namespace dtsgen
