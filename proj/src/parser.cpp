#include "dtsgen/parser.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"

namespace dtsgen
{

namespace
{

using detail::Token;

const std::set<std::string, std::less<>> kMemberModifiers{
    "public", "private", "protected", "static", "readonly", "abstract", "declare", "override", "accessor"};

std::uint32_t modifier_bit(std::string_view word)
{
  if (word == "public") return Field::kPublic;
  if (word == "private") return Field::kPrivate;
  if (word == "protected") return Field::kProtected;
  if (word == "static") return Field::kStatic;
  if (word == "readonly") return Field::kReadonly;
  if (word == "abstract") return Field::kAbstract;
  return Field::kNoModifier;
}

/// One member of an interface body or object type literal.
struct Member
{
  enum class Kind { Property, Method, Call, Construct, Index, Skipped } kind = Kind::Skipped;
  Field field;          // Property / Index (name = key parameter, type = value type)
  std::string key_type; // Index
  Signature signature;  // Method / Call / Construct
  bool optional = false;
  std::uint32_t modifiers = Field::kNoModifier;
};

class Parser
{
public:
  explicit Parser(std::string_view source)
  {
    if (source.starts_with("\xEF\xBB\xBF")) source.remove_prefix(3);
    tokens_ = detail::tokenize(source);
  }

  DeclarationModule module(const std::string & name)
  {
    module_.module_name = name;
    while (!at_end()) statement(module_.scope, true);
    finish();
    return std::move(module_);
  }

  TsType single_type()
  {
    TsType t = type();
    if (!at_end()) error("unexpected '" + peek().text + "' after type");
    return t;
  }

private:
  // -- token helpers ---------------------------------------------------------

  const Token & peek(std::size_t k = 0) const
  {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  const Token & next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool accept(std::string_view punct)
  {
    if (!peek().is(punct)) return false;
    ++pos_;
    return true;
  }

  bool accept_word(std::string_view word)
  {
    if (!peek().is_word(word)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void error(const std::string & message) const
  {
    throw ParseError(message, peek().line, peek().column);
  }

  [[noreturn]] void error_at(const std::string & message, const Token & t) const
  {
    throw ParseError(message, t.line, t.column);
  }

  void expect(std::string_view punct)
  {
    if (!accept(punct)) {
      error("expected '" + std::string(punct) + "' but found " + describe(peek()));
    }
  }

  static std::string describe(const Token & t)
  {
    if (t.kind == Token::Kind::End) return "end of input";
    if (t.kind == Token::Kind::String) return "string literal";
    return "'" + t.text + "'";
  }

  std::string identifier(const char * what)
  {
    if (peek().kind != Token::Kind::Identifier) {
      error(std::string("expected ") + what + " but found " + describe(peek()));
    }
    return next().text;
  }

  std::string qualified_name()
  {
    std::string name = identifier("a name");
    while (peek().is(".") && peek(1).kind == Token::Kind::Identifier) {
      ++pos_;
      name += "." + next().text;
    }
    return name;
  }

  /// Statement terminator: `;`, or automatic insertion before a line break, `}` or end.
  void end_statement()
  {
    if (accept(";")) return;
    if (at_end() || peek().is("}") || peek().newline_before) return;
    error("expected ';' but found " + describe(peek()));
  }

  void end_member()
  {
    if (accept(";") || accept(",")) return;
    if (at_end() || peek().is("}") || peek().newline_before) return;
    error("expected ';' but found " + describe(peek()));
  }

  void unsupported(const std::string & reason)
  {
    if (std::find(module_.unsupported.begin(), module_.unsupported.end(), reason) == module_.unsupported.end()) {
      module_.unsupported.push_back(reason);
    }
  }

  /// Skips one balanced group starting at the current opening bracket.
  void skip_group()
  {
    const Token & open = peek();
    const std::string close = open.is("{") ? "}" : open.is("(") ? ")" : open.is("[") ? "]" : ">";
    const std::string opener = open.text;
    int depth = 0;
    do {
      if (at_end()) error_at("unbalanced '" + opener + "'", open);
      const Token & t = next();
      if (t.is(opener)) ++depth;
      if (t.is(close)) --depth;
    } while (depth > 0);
  }

  /// Skips a statement the parser does not model.
  void skip_statement()
  {
    bool consumed = false;
    while (!at_end()) {
      const Token & t = peek();
      if (consumed && t.newline_before && !t.is_word("from") && !t.is(".") && !t.is(",")) return;
      if (t.is(";")) {
        ++pos_;
        return;
      }
      if (t.is("}")) return;
      if (t.is("{") || t.is("(") || t.is("[")) {
        skip_group();
        consumed = true;
        if (peek().is_word("from") || peek().is(".") || peek().is("=") || peek().is(":") || peek().is("=>")) continue;
        accept(";");
        return;
      }
      ++pos_;
      consumed = true;
    }
  }

  // -- statements ------------------------------------------------------------

  void statement(Scope & scope, bool top)
  {
    const Token & t = peek();
    if (t.kind == Token::Kind::TripleSlash) {
      unsupported("triple-slash directive");
      ++pos_;
      return;
    }
    if (accept(";")) return;
    if (t.is_word("import")) {
      unsupported("import declaration");
      skip_statement();
      return;
    }
    if (t.is_word("export")) {
      ++pos_;
      export_statement(scope, top);
      return;
    }
    if (t.is_word("declare")) {
      ++pos_;
      if (peek().is_word("global")) {
        unsupported("declare global");
        skip_statement();
        return;
      }
    }
    declaration(scope);
  }

  void export_statement(Scope & scope, bool top)
  {
    const Token & t = peek();
    if (t.is("=")) {
      ++pos_;
      const Token & at = peek();
      const std::string name = qualified_name();
      end_statement();
      if (!top) {
        unsupported("export assignment inside a namespace");
      } else if (module_.export_assignment) {
        error_at("duplicate export assignment", at);
      } else {
        module_.export_assignment = name;
      }
      return;
    }
    if (t.is_word("as") && peek(1).is_word("namespace")) {
      skip_statement();
      return;
    }
    if (t.is_word("default")) {
      unsupported("export default");
      skip_statement();
      return;
    }
    if (t.is("{") || t.is("*")) {
      unsupported("export list");
      skip_statement();
      return;
    }
    if (t.is_word("import")) {
      unsupported("import alias");
      skip_statement();
      return;
    }
    accept_word("declare");
    declaration(scope);
  }

  void declaration(Scope & scope)
  {
    const Token & t = peek();
    if (t.is_word("function")) {
      ++pos_;
      function_declaration(scope);
    } else if (t.is_word("class") || (t.is_word("abstract") && peek(1).is_word("class"))) {
      const bool is_abstract = accept_word("abstract");
      ++pos_;
      class_declaration(scope, is_abstract);
    } else if (t.is_word("interface")) {
      ++pos_;
      interface_declaration(scope);
    } else if (t.is_word("type") && peek(1).kind == Token::Kind::Identifier) {
      ++pos_;
      alias_declaration(scope);
    } else if (t.is_word("enum") || (t.is_word("const") && peek(1).is_word("enum"))) {
      unsupported("enum");
      skip_statement();
    } else if (t.is_word("const") || t.is_word("let") || t.is_word("var")) {
      ++pos_;
      variable_declaration(scope, t.text == "const");
    } else if (t.is_word("namespace") || t.is_word("module")) {
      ++pos_;
      if (peek().kind == Token::Kind::String) {
        unsupported("declare module \"" + peek().text + "\"");
        skip_statement();
        return;
      }
      namespace_declaration(scope);
    } else {
      error("unexpected " + describe(t));
    }
  }

  void function_declaration(Scope & scope)
  {
    const Token & at = peek();
    FunctionDecl f;
    f.name = identifier("a function name");
    Signature sig = signature(":");
    end_statement();
    if (scope.find_class(f.name)) error_at("function '" + f.name + "' clashes with a class of the same name", at);
    for (auto & existing : scope.functions) {
      if (existing.name == f.name) {
        existing.overloads.push_back(std::move(sig));
        return;
      }
    }
    f.overloads.push_back(std::move(sig));
    scope.functions.push_back(std::move(f));
  }

  void class_declaration(Scope & scope, bool is_abstract)
  {
    const Token & at = peek();
    ClassDecl c;
    c.name = identifier("a class name");
    if (scope.find_class(c.name)) error_at("duplicate class '" + c.name + "'", at);
    if (scope.find_function(c.name)) error_at("class '" + c.name + "' clashes with a function of the same name", at);
    c.type_params = type_parameters();
    if (accept_word("extends")) c.heritage.push_back(heritage_type());
    if (accept_word("implements")) {
      do {
        c.heritage.push_back(heritage_type());
      } while (accept(","));
    }
    (void)is_abstract;
    expect("{");
    while (!accept("}")) {
      if (at_end()) error("unterminated class body");
      class_member(c);
    }
    scope.classes.push_back(std::move(c));
  }

  TsType heritage_type()
  {
    const std::string name = qualified_name();
    return TsType::named(name, type_arguments());
  }

  void class_member(ClassDecl & c)
  {
    if (accept(";")) return;
    std::uint32_t mods = Field::kNoModifier;
    while (peek().kind == Token::Kind::Identifier && kMemberModifiers.contains(peek().text) && is_modifier_position()) {
      mods |= modifier_bit(next().text);
    }

    if (peek().is("#")) {
      unsupported("private name");
      skip_member();
      return;
    }
    if (peek().is_word("constructor") && (peek(1).is("(") || peek(1).is("<"))) {
      ++pos_;
      Signature sig = signature(":");
      sig.return_type = TsType::unspecified();
      c.constructors.push_back(std::move(sig));
      end_member();
      return;
    }
    if ((peek().is_word("get") || peek().is_word("set")) && is_property_name(peek(1))) {
      const bool getter = next().text == "get";
      Field p;
      p.name = property_name();
      p.modifiers = mods;
      Signature sig = signature(":");
      p.type = getter ? sig.return_type : (sig.params.empty() ? TsType::unspecified() : sig.params.front().type);
      end_member();
      auto it = std::find_if(c.properties.begin(), c.properties.end(), [&](const Field & f) { return f.name == p.name; });
      if (it == c.properties.end()) c.properties.push_back(std::move(p));
      return;
    }
    if (peek().is("[")) {
      if (!is_index_signature()) {
        unsupported("computed property name");
        skip_member();
        return;
      }
      Member m = index_signature();
      m.field.modifiers |= mods;
      c.index_signatures.push_back(std::move(m.field));
      end_member();
      return;
    }

    const std::string name = property_name();
    const bool optional = accept("?");
    accept("!");
    if (peek().is("(") || peek().is("<")) {
      Signature sig = signature(":");
      end_member();
      auto it = std::find_if(c.methods.begin(), c.methods.end(), [&](const FunctionDecl & f) { return f.name == name; });
      if (it == c.methods.end()) {
        FunctionDecl f;
        f.name = name;
        f.modifiers = mods;
        f.optional = optional;
        c.methods.push_back(std::move(f));
        it = std::prev(c.methods.end());
      }
      it->overloads.push_back(std::move(sig));
      return;
    }
    Field p;
    p.name = name;
    p.optional = optional;
    p.modifiers = mods;
    p.type = accept(":") ? type() : TsType::unspecified();
    if (accept("=")) skip_initializer();
    end_member();
    c.properties.push_back(std::move(p));
  }

  /// A modifier keyword is a modifier unless it is itself the member name.
  bool is_modifier_position() const
  {
    const Token & n = peek(1);
    return !(n.is("(") || n.is(":") || n.is("?") || n.is(";") || n.is("<") || n.is(",") || n.is("}") ||
             n.is("=") || n.is("!") || n.newline_before);
  }

  static bool is_property_name(const Token & t)
  {
    return t.kind == Token::Kind::Identifier || t.kind == Token::Kind::String || t.kind == Token::Kind::Number;
  }

  std::string property_name()
  {
    if (!is_property_name(peek())) error("expected a member name but found " + describe(peek()));
    return next().text;
  }

  void skip_member()
  {
    while (!at_end() && !peek().is(";") && !peek().is("}") && !peek().is(",")) {
      if (peek().is("{") || peek().is("(") || peek().is("[")) {
        skip_group();
      } else {
        ++pos_;
      }
      if (peek().newline_before) break;
    }
    accept(";") || accept(",");
  }

  void skip_initializer()
  {
    while (!at_end() && !peek().is(";") && !peek().is(",") && !peek().is("}") && !peek().newline_before) {
      if (peek().is("{") || peek().is("(") || peek().is("[")) {
        skip_group();
      } else {
        ++pos_;
      }
    }
  }

  bool is_index_signature() const
  {
    return peek().is("[") && peek(1).kind == Token::Kind::Identifier && peek(2).is(":");
  }

  Member index_signature()
  {
    expect("[");
    Member m;
    m.kind = Member::Kind::Index;
    m.field.name = identifier("an index parameter");
    expect(":");
    m.key_type = render(type());
    expect("]");
    m.field.optional = accept("?");
    expect(":");
    m.field.type = type();
    return m;
  }

  void interface_declaration(Scope & scope)
  {
    InterfaceDecl i;
    i.name = identifier("an interface name");
    i.type_params = type_parameters();
    if (accept_word("extends")) {
      do {
        i.extends.push_back(heritage_type());
      } while (accept(","));
    }
    expect("{");
    while (!accept("}")) {
      if (at_end()) error("unterminated interface body");
      Member m = type_member();
      end_member();
      add_member(i, std::move(m));
    }
    for (auto & existing : scope.interfaces) {
      if (existing.name != i.name) continue;
      existing.extends.insert(existing.extends.end(), i.extends.begin(), i.extends.end());
      existing.properties.insert(existing.properties.end(), i.properties.begin(), i.properties.end());
      existing.methods.insert(existing.methods.end(), i.methods.begin(), i.methods.end());
      existing.call_signatures.insert(existing.call_signatures.end(), i.call_signatures.begin(), i.call_signatures.end());
      existing.construct_signatures.insert(existing.construct_signatures.end(), i.construct_signatures.begin(),
                                           i.construct_signatures.end());
      existing.index_signatures.insert(existing.index_signatures.end(), i.index_signatures.begin(),
                                       i.index_signatures.end());
      if (existing.type_params.empty()) existing.type_params = i.type_params;
      return;
    }
    scope.interfaces.push_back(std::move(i));
  }

  static void add_member(InterfaceDecl & i, Member m)
  {
    switch (m.kind) {
      case Member::Kind::Property: i.properties.push_back(std::move(m.field)); break;
      case Member::Kind::Method: {
        auto it = std::find_if(i.methods.begin(), i.methods.end(),
                               [&](const FunctionDecl & f) { return f.name == m.field.name; });
        if (it == i.methods.end()) {
          FunctionDecl f;
          f.name = m.field.name;
          f.optional = m.optional;
          f.modifiers = m.modifiers;
          i.methods.push_back(std::move(f));
          it = std::prev(i.methods.end());
        }
        it->overloads.push_back(std::move(m.signature));
        break;
      }
      case Member::Kind::Call: i.call_signatures.push_back(std::move(m.signature)); break;
      case Member::Kind::Construct: i.construct_signatures.push_back(std::move(m.signature)); break;
      case Member::Kind::Index: i.index_signatures.push_back(std::move(m.field)); break;
      case Member::Kind::Skipped: break;
    }
  }

  /// Interface / type-literal member (the terminator is left to the caller).
  Member type_member()
  {
    Member m;
    if (peek().is("(") || peek().is("<")) {
      m.kind = Member::Kind::Call;
      m.signature = signature(":");
      return m;
    }
    if (peek().is_word("new") && (peek(1).is("(") || peek(1).is("<"))) {
      ++pos_;
      m.kind = Member::Kind::Construct;
      m.signature = signature(":");
      return m;
    }
    while (peek().is_word("readonly") && is_modifier_position()) {
      ++pos_;
      m.modifiers |= Field::kReadonly;
    }
    if ((peek().is_word("get") || peek().is_word("set")) && is_property_name(peek(1)) && !peek(1).newline_before) {
      const bool getter = next().text == "get";
      m.kind = Member::Kind::Property;
      m.field.name = property_name();
      Signature sig = signature(":");
      m.field.type = getter ? sig.return_type : (sig.params.empty() ? TsType::unspecified() : sig.params.front().type);
      return m;
    }
    if (peek().is("[")) {
      if (!is_index_signature()) {
        unsupported("computed property name");
        skip_group();
        accept("?");
        if (accept(":")) {
          (void)type();
        } else if (peek().is("(") || peek().is("<")) {
          (void)signature(":");
        }
        return m;
      }
      m = index_signature();
      m.field.modifiers |= m.modifiers;
      return m;
    }
    m.field.name = property_name();
    m.optional = accept("?");
    if (peek().is("(") || peek().is("<")) {
      m.kind = Member::Kind::Method;
      m.signature = signature(":");
      return m;
    }
    m.kind = Member::Kind::Property;
    m.field.optional = m.optional;
    m.field.modifiers = m.modifiers;
    m.field.type = accept(":") ? type() : TsType::unspecified();
    return m;
  }

  void alias_declaration(Scope & scope)
  {
    const Token & at = peek();
    AliasDecl a;
    a.name = identifier("an alias name");
    if (scope.find_alias(a.name)) error_at("duplicate type alias '" + a.name + "'", at);
    a.type_params = type_parameters();
    expect("=");
    a.type = type();
    end_statement();
    scope.aliases.push_back(std::move(a));
  }

  void variable_declaration(Scope & scope, bool is_const)
  {
    do {
      const Token & at = peek();
      VariableDecl v;
      v.is_const = is_const;
      v.name = identifier("a variable name");
      v.type = accept(":") ? type() : TsType::unspecified();
      if (accept("=")) skip_initializer();
      const bool duplicate = std::any_of(scope.variables.begin(), scope.variables.end(),
                                         [&](const VariableDecl & x) { return x.name == v.name; });
      if (duplicate && is_const) error_at("duplicate constant '" + v.name + "'", at);
      if (!duplicate) scope.variables.push_back(std::move(v));
    } while (accept(","));
    end_statement();
  }

  void namespace_declaration(Scope & scope)
  {
    std::vector<std::string> path{identifier("a namespace name")};
    while (accept(".")) path.push_back(identifier("a namespace name"));
    expect("{");
    Scope * target = &scope;
    for (const auto & part : path) target = &target->namespace_named(part).body;
    while (!accept("}")) {
      if (at_end()) error("unterminated namespace body");
      statement(*target, false);
    }
  }

  // -- signatures ------------------------------------------------------------

  std::vector<std::string> type_parameters()
  {
    std::vector<std::string> names;
    if (!accept("<")) return names;
    do {
      if (peek().is(">")) break;
      accept_word("const");
      accept_word("in");
      accept_word("out");
      names.push_back(identifier("a type parameter"));
      if (accept_word("extends")) (void)type();
      if (accept("=")) (void)type();
    } while (accept(","));
    expect(">");
    return names;
  }

  std::vector<TsType> type_arguments()
  {
    std::vector<TsType> args;
    if (!accept("<")) return args;
    do {
      if (peek().is(">")) break;
      args.push_back(type());
    } while (accept(","));
    expect(">");
    return args;
  }

  /// `<T>(params) <sep> R`; the return annotation may be absent for `:`.
  Signature signature(std::string_view separator)
  {
    Signature sig;
    sig.type_params = type_parameters();
    sig.params = parameters();
    if (accept(separator)) {
      sig.return_type = return_type();
    } else if (separator == "=>") {
      error("expected '=>' but found " + describe(peek()));
    } else {
      sig.return_type = TsType::unspecified();
    }
    return sig;
  }

  std::vector<Param> parameters()
  {
    expect("(");
    std::vector<Param> params;
    while (!accept(")")) {
      Param p;
      while (peek().kind == Token::Kind::Identifier && kMemberModifiers.contains(peek().text) &&
             (peek(1).kind == Token::Kind::Identifier || peek(1).is("{") || peek(1).is("["))) {
        p.modifiers |= modifier_bit(next().text);
      }
      p.rest = accept("...");
      if (peek().is("{") || peek().is("[")) {
        skip_group();
        p.name = "__destructured";
      } else {
        p.name = identifier("a parameter name");
      }
      p.optional = accept("?");
      p.type = accept(":") ? type() : TsType::unspecified();
      if (accept("=")) skip_initializer();
      const bool is_this = p.name == "this";
      if (!is_this) params.push_back(std::move(p));
      if (!peek().is(")")) expect(",");
    }
    return params;
  }

  TsType return_type()
  {
    if (peek().is_word("asserts") && peek(1).kind == Token::Kind::Identifier) {
      pos_ += 2;
      if (accept_word("is")) (void)type();
      return opaque("type assertion");
    }
    if (peek().kind == Token::Kind::Identifier && peek(1).is_word("is") && !peek(1).newline_before) {
      pos_ += 2;
      (void)type();
      return opaque("type predicate");
    }
    return type();
  }

  // -- types -----------------------------------------------------------------

  TsType opaque(const std::string & what)
  {
    unsupported(what + " type");
    return TsType{TsType::Kind::Opaque, what, {}, {}, TsType::kNone};
  }

  TsType type(bool allow_conditional = true)
  {
    if (starts_function_type()) return function_type();
    TsType t = union_type();
    if (allow_conditional && peek().is_word("extends") && !peek().newline_before) {
      ++pos_;
      (void)type(false);
      expect("?");
      (void)type();
      expect(":");
      (void)type();
      return opaque("conditional");
    }
    return t;
  }

  TsType union_type()
  {
    accept("|");
    std::vector<TsType> members{intersection_type()};
    while (accept("|")) members.push_back(intersection_type());
    if (members.size() == 1) return members.front();
    return TsType{TsType::Kind::Union, {}, std::move(members), {}, TsType::kNone};
  }

  TsType intersection_type()
  {
    accept("&");
    std::vector<TsType> members{operator_type()};
    while (accept("&")) members.push_back(operator_type());
    if (members.size() == 1) return members.front();
    return TsType{TsType::Kind::Intersection, {}, std::move(members), {}, TsType::kNone};
  }

  TsType operator_type()
  {
    if (peek().is_word("keyof") && !peek(1).is(")")) {
      ++pos_;
      (void)operator_type();
      return opaque("keyof");
    }
    if (peek().is_word("unique") && peek(1).is_word("symbol")) {
      pos_ += 2;
      return opaque("unique symbol");
    }
    if (peek().is_word("infer")) {
      ++pos_;
      (void)identifier("an inferred type name");
      return opaque("infer");
    }
    if (peek().is_word("readonly") && !peek(1).is(")") && !peek(1).is(",")) {
      ++pos_;
      TsType t = operator_type();
      if (t.is(TsType::Kind::Array)) t.flags |= TsType::kReadonlyArray;
      return t;
    }
    return postfix_type();
  }

  TsType postfix_type()
  {
    TsType t = primary_type();
    while (peek().is("[") && !peek().newline_before) {
      ++pos_;
      if (accept("]")) {
        t = TsType::array(std::move(t));
        continue;
      }
      (void)type();
      expect("]");
      t = opaque("indexed access");
    }
    return t;
  }

  bool starts_function_type()
  {
    if (peek().is("<")) return true;
    if (peek().is_word("new") || (peek().is_word("abstract") && peek(1).is_word("new"))) return true;
    if (!peek().is("(")) return false;
    // Scan to the matching parenthesis and look for an arrow.
    int depth = 0;
    for (std::size_t k = 0; pos_ + k < tokens_.size(); ++k) {
      const Token & t = peek(k);
      if (t.kind == Token::Kind::End) return false;
      if (t.is("(") || t.is("[") || t.is("{")) ++depth;
      if (t.is(")") || t.is("]") || t.is("}")) --depth;
      if (depth == 0) return peek(k + 1).is("=>");
    }
    return false;
  }

  TsType function_type()
  {
    std::uint32_t flags = TsType::kNone;
    accept_word("abstract");
    if (accept_word("new")) flags |= TsType::kConstructorType;
    Signature sig = signature("=>");
    if (!sig.type_params.empty()) generic_callback_ = true;
    TsType t = TsType::callback(std::move(sig.params), std::move(sig.return_type));
    t.flags |= flags;
    return t;
  }

  TsType primary_type()
  {
    const Token & t = peek();
    switch (t.kind) {
      case Token::Kind::String: {
        ++pos_;
        return TsType::literal("\"" + t.text + "\"");
      }
      case Token::Kind::Number: {
        ++pos_;
        return TsType::literal(t.text);
      }
      case Token::Kind::Template: {
        ++pos_;
        return opaque("template literal");
      }
      case Token::Kind::End:
      case Token::Kind::TripleSlash: error("expected a type but found " + describe(t));
      case Token::Kind::Punct: break;
      case Token::Kind::Identifier: return named_type();
    }

    if (t.is("-") && peek(1).kind == Token::Kind::Number) {
      ++pos_;
      return TsType::literal("-" + next().text);
    }
    if (t.is("(")) {
      ++pos_;
      TsType inner = type();
      expect(")");
      return inner;
    }
    if (t.is("[")) return tuple_type();
    if (t.is("{")) return object_type();
    error("expected a type but found " + describe(t));
  }

  TsType named_type()
  {
    const Token & t = peek();
    if (peek(1).is(".") && t.text != "typeof") {
      const std::string name = qualified_name();
      return TsType::named(name, type_arguments());
    }
    const std::string word = next().text;
    if (word == "string") return TsType::string();
    if (word == "number") return TsType::number();
    if (word == "boolean") return TsType::boolean();
    if (word == "void") return TsType::void_type();
    if (word == "null") return TsType::null();
    if (word == "undefined") return TsType::undefined();
    if (word == "object") return TsType::object();
    if (word == "any") return TsType::any();
    if (word == "unknown") return TsType{TsType::Kind::Unknown, {}, {}, {}, TsType::kNone};
    if (word == "never") return TsType{TsType::Kind::Never, {}, {}, {}, TsType::kNone};
    if (word == "true" || word == "false") return TsType::literal(word);
    if (word == "typeof") {
      if (accept_word("import")) {
        skip_group();
      } else {
        (void)qualified_name();
      }
      while (accept(".")) (void)identifier("a name");
      (void)type_arguments();
      return opaque("typeof");
    }
    if (word == "import" && peek().is("(")) {
      skip_group();
      while (accept(".")) (void)identifier("a name");
      (void)type_arguments();
      return opaque("import");
    }
    std::vector<TsType> args = type_arguments();
    if ((word == "Array" || word == "ReadonlyArray") && args.size() == 1) {
      TsType a = TsType::array(std::move(args.front()));
      if (word == "ReadonlyArray") a.flags |= TsType::kReadonlyArray;
      return a;
    }
    return TsType::named(word, std::move(args));
  }

  TsType tuple_type()
  {
    expect("[");
    std::vector<TsType> elements;
    while (!accept("]")) {
      accept("...");
      if (peek().kind == Token::Kind::Identifier && (peek(1).is(":") || (peek(1).is("?") && peek(2).is(":")))) {
        ++pos_;
        accept("?");
        expect(":");
      }
      TsType e = type();
      accept("?");
      elements.push_back(std::move(e));
      if (!peek().is("]")) expect(",");
    }
    return TsType{TsType::Kind::Tuple, {}, std::move(elements), {}, TsType::kNone};
  }

  bool is_mapped_type() const
  {
    std::size_t k = 1;
    if (peek(k).is("+") || peek(k).is("-")) ++k;
    if (peek(k).is_word("readonly")) ++k;
    return peek(k).is("[") && peek(k + 1).kind == Token::Kind::Identifier && peek(k + 2).is_word("in");
  }

  TsType object_type()
  {
    if (is_mapped_type()) {
      skip_group();
      return opaque("mapped");
    }
    expect("{");
    TsType shape = TsType::object_literal({});
    while (!accept("}")) {
      if (at_end()) error("unterminated object type");
      Member m = type_member();
      end_member();
      switch (m.kind) {
        case Member::Kind::Property: shape.fields.push_back(std::move(m.field)); break;
        case Member::Kind::Method: {
          Field f;
          f.name = m.field.name;
          f.optional = m.optional;
          f.type = TsType::callback(std::move(m.signature.params), std::move(m.signature.return_type));
          shape.fields.push_back(std::move(f));
          break;
        }
        case Member::Kind::Call:
        case Member::Kind::Construct: {
          const bool call = m.kind == Member::Kind::Call;
          Field f;
          f.name = call ? "()" : "new()";
          f.type = TsType::callback(std::move(m.signature.params), std::move(m.signature.return_type));
          shape.flags |= call ? TsType::kCallSignature : TsType::kConstructSignature;
          shape.fields.push_back(std::move(f));
          break;
        }
        case Member::Kind::Index: {
          Field f = std::move(m.field);
          f.name = "[" + f.name + ": " + m.key_type + "]";
          shape.flags |= TsType::kIndexSignature;
          shape.fields.push_back(std::move(f));
          break;
        }
        case Member::Kind::Skipped: break;
      }
    }
    return shape;
  }

  // -- module assembly -------------------------------------------------------

  void finish()
  {
    DeclarationModule & m = module_;
    m.template_kind = TemplateKind::Module;
    if (m.export_assignment) {
      const std::string & name = *m.export_assignment;
      if (m.scope.find_function(name)) {
        m.template_kind = TemplateKind::ModuleFunction;
      } else if (m.scope.find_class(name)) {
        m.template_kind = TemplateKind::ModuleClass;
      } else if (m.scope.find_namespace(name)) {
        hoist_namespace(name);
        m.export_assignment.reset();
      } else {
        unsupported("export assignment of a non-function value");
      }
    }
    m.feature_tags = tag_features(m);
    if (generic_callback_) m.feature_tags.insert(FeatureTag::GenericsFunction);
  }

  /// `export = NS` where NS is only a namespace: its members become module exports.
  void hoist_namespace(const std::string & name)
  {
    Scope & top = module_.scope;
    auto it = std::find_if(top.namespaces.begin(), top.namespaces.end(),
                           [&](const NamespaceDecl & n) { return n.name == name; });
    Scope body = std::move(it->body);
    top.namespaces.erase(it);
    auto append = [](auto & into, auto & from) {
      into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
    };
    append(top.functions, body.functions);
    append(top.classes, body.classes);
    append(top.interfaces, body.interfaces);
    append(top.aliases, body.aliases);
    append(top.variables, body.variables);
    append(top.namespaces, body.namespaces);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  DeclarationModule module_;
  bool generic_callback_ = false;
};

}  // namespace

DeclarationModule parse(std::string_view source, const std::string & module_name)
{
  return Parser(source).module(module_name);
}

TsType parse_type(std::string_view source) { return Parser(source).single_type(); }

}  // namespace dtsgen
