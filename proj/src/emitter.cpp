#include "dtsgen/emitter.hpp"

#include <sstream>

namespace dtsgen
{

namespace
{

std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 4, ' '); }

std::string quoted(const std::string & name)
{
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string type_params(const std::vector<std::string> & params)
{
  if (params.empty()) return {};
  std::string out = "<";
  for (std::size_t i = 0; i < params.size(); ++i) out += (i ? ", " : "") + params[i];
  return out + ">";
}

std::string modifiers(std::uint32_t m)
{
  std::string out;
  if (m & Field::kPrivate) out += "private ";
  if (m & Field::kProtected) out += "protected ";
  if (m & Field::kPublic) out += "public ";
  if (m & Field::kStatic) out += "static ";
  if (m & Field::kAbstract) out += "abstract ";
  if (m & Field::kReadonly) out += "readonly ";
  return out;
}

std::string signature(const Signature & s)
{
  std::string out = type_params(s.type_params) + "(" + render_params(s.params) + ")";
  if (!s.return_type.is(TsType::Kind::Unspecified)) out += ": " + render(s.return_type);
  return out;
}

std::string property(const Field & f, bool quote)
{
  std::string out = modifiers(f.modifiers) + (quote ? quoted(f.name) : f.name);
  if (f.optional) out += "?";
  if (!f.type.is(TsType::Kind::Unspecified)) out += ": " + render(f.type);
  return out + ";";
}

std::string index_signature(const Field & f)
{
  return modifiers(f.modifiers) + "[" + f.name + ": string]: " + render(f.type) + ";";
}

class Printer
{
public:
  std::string str() const { return out_.str(); }

  void line(int level, const std::string & text) { out_ << indent(level) << text << "\n"; }
  void blank() { out_ << "\n"; }

  void function(int level, const std::string & prefix, const FunctionDecl & f)
  {
    for (const auto & s : f.overloads) line(level, prefix + f.name + signature(s) + ";");
  }

  void interface(int level, const std::string & prefix, const InterfaceDecl & i)
  {
    std::string head = prefix + "interface " + i.name + type_params(i.type_params);
    for (std::size_t k = 0; k < i.extends.size(); ++k) head += (k ? ", " : " extends ") + render(i.extends[k]);
    line(level, head + " {");
    for (const auto & p : i.properties) line(level + 1, property(p, true));
    for (const auto & m : i.methods) {
      for (const auto & s : m.overloads) {
        line(level + 1, modifiers(m.modifiers) + quoted(m.name) + (m.optional ? "?" : "") + signature(s) + ";");
      }
    }
    for (const auto & s : i.call_signatures) line(level + 1, signature(s) + ";");
    for (const auto & s : i.construct_signatures) line(level + 1, "new " + signature(s) + ";");
    for (const auto & ix : i.index_signatures) line(level + 1, index_signature(ix));
    line(level, "}");
  }

  void klass(int level, const std::string & prefix, const ClassDecl & c)
  {
    std::string head = prefix + "class " + c.name + type_params(c.type_params);
    for (std::size_t k = 0; k < c.heritage.size(); ++k) {
      head += (k == 0 ? " extends " : k == 1 ? " implements " : ", ") + render(c.heritage[k]);
    }
    line(level, head + " {");
    for (const auto & p : c.properties) line(level + 1, property(p, false));
    for (const auto & ix : c.index_signatures) line(level + 1, index_signature(ix));
    for (const auto & s : c.constructors) line(level + 1, "constructor" + signature(s) + ";");
    for (const auto & m : c.methods) {
      for (const auto & s : m.overloads) {
        line(level + 1, modifiers(m.modifiers) + m.name + (m.optional ? "?" : "") + signature(s) + ";");
      }
    }
    line(level, "}");
  }

  void alias(int level, const std::string & prefix, const AliasDecl & a)
  {
    line(level, prefix + "type " + a.name + type_params(a.type_params) + " = " + render(a.type) + ";");
  }

  void variable(int level, const std::string & prefix, const VariableDecl & v)
  {
    std::string text = prefix + (v.is_const ? "const " : "let ") + v.name;
    if (!v.type.is(TsType::Kind::Unspecified)) text += ": " + render(v.type);
    line(level, text + ";");
  }

  /// Namespace body: every member exported and followed by a blank line.
  void namespace_body(int level, const Scope & s)
  {
    for (const auto & i : s.interfaces) {
      interface(level, "export ", i);
      blank();
    }
    for (const auto & a : s.aliases) {
      alias(level, "export ", a);
      blank();
    }
    for (const auto & c : s.classes) {
      klass(level, "export ", c);
      blank();
    }
    for (const auto & v : s.variables) {
      variable(level, "export ", v);
      blank();
    }
    for (const auto & f : s.functions) {
      function(level, "export function ", f);
      blank();
    }
    for (const auto & n : s.namespaces) {
      line(level, "export namespace " + n.name + " {");
      namespace_body(level + 1, n.body);
      line(level, "}");
      blank();
    }
  }

  void declared_namespace(const NamespaceDecl & n, const std::string & prefix)
  {
    line(0, prefix + "namespace " + n.name + " {");
    namespace_body(1, n.body);
    line(0, "}");
  }

private:
  std::ostringstream out_;
};

void emit_module_template(Printer & p, const DeclarationModule & m)
{
  const Scope & s = m.scope;
  for (const auto & i : s.interfaces) {
    p.interface(0, "export ", i);
    p.blank();
  }
  for (const auto & a : s.aliases) p.alias(0, "export ", a);
  for (const auto & v : s.variables) p.variable(0, "export declare ", v);
  for (const auto & c : s.classes) p.klass(0, "export declare ", c);
  for (const auto & f : s.functions) p.function(0, "export function ", f);
  for (const auto & n : s.namespaces) p.declared_namespace(n, "export declare ");
}

void emit_export_template(Printer & p, const DeclarationModule & m)
{
  const Scope & s = m.scope;
  p.line(0, "export = " + *m.export_assignment + ";");
  p.blank();
  for (const auto & i : s.interfaces) {
    p.interface(0, "", i);
    p.blank();
  }
  for (const auto & a : s.aliases) p.alias(0, "", a);
  for (const auto & v : s.variables) p.variable(0, "declare ", v);
  for (const auto & f : s.functions) p.function(0, "declare function ", f);
  for (const auto & c : s.classes) {
    p.klass(0, "declare ", c);
    p.blank();
  }
  for (const auto & n : s.namespaces) p.declared_namespace(n, "declare ");
}

}  // namespace

void check_template(const DeclarationModule & m)
{
  const std::string name(template_name(m.template_kind));
  switch (m.template_kind) {
    case TemplateKind::Module:
      if (m.export_assignment) throw EmitError("module template must not carry an export assignment");
      return;
    case TemplateKind::ModuleFunction:
      if (!m.export_assignment) throw EmitError(name + " template requires an export assignment");
      if (m.scope.functions.size() != 1) throw EmitError(name + " template requires exactly one top-level function");
      if (m.scope.functions.front().overloads.empty()) throw EmitError("function without signatures");
      return;
    case TemplateKind::ModuleClass:
      if (!m.export_assignment) throw EmitError(name + " template requires an export assignment");
      if (m.scope.classes.size() != 1) throw EmitError(name + " template requires exactly one class");
      return;
  }
}

std::string emit(const DeclarationModule & module)
{
  check_template(module);
  Printer p;
  if (module.template_kind == TemplateKind::Module) {
    emit_module_template(p, module);
  } else {
    emit_export_template(p, module);
  }
  return p.str();
}

}  // namespace dtsgen
