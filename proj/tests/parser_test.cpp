#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtsgen/emitter.hpp"
#include "dtsgen/parser.hpp"

namespace dtsgen
{
namespace
{

namespace fs = std::filesystem;

std::string read(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DeclarationModule dt(const std::string & name) { return parse(read(fs::path(FIXTURE_DIR) / "dt" / (name + ".d.ts")), name); }

TEST(Parse, ModuleFunctionFigure)
{
  const auto m = parse(read(fs::path(FIXTURE_DIR) / "generated" / "glob-to-regexp.d.ts"), "glob-to-regexp");
  EXPECT_EQ(m.template_kind, TemplateKind::ModuleFunction);
  EXPECT_EQ(m.export_assignment, "GlobToRegexp");
  const auto * fn = m.scope.find_function("GlobToRegexp");
  ASSERT_NE(fn, nullptr);
  ASSERT_EQ(fn->overloads.size(), 1u);
  const auto & params = fn->overloads[0].params;
  ASSERT_EQ(params.size(), 2u);
  EXPECT_TRUE(params[1].optional);
  EXPECT_EQ(render(params[1].type), "GlobToRegexp.I__opts");
  const auto * opts = m.scope.find_namespace("GlobToRegexp")->body.find_interface("I__opts");
  ASSERT_NE(opts, nullptr);
  EXPECT_EQ(opts->properties.size(), 3u);
}

TEST(Parse, ModuleClassFigure)
{
  const auto m = parse(read(fs::path(FIXTURE_DIR) / "generated" / "greet-classes-module.d.ts"));
  EXPECT_EQ(m.template_kind, TemplateKind::ModuleClass);
  ASSERT_EQ(m.scope.classes.size(), 1u);
  EXPECT_EQ(m.scope.classes[0].name, "Greeter");
}

TEST(Parse, ModuleTemplateFigure)
{
  const auto m = parse(read(fs::path(FIXTURE_DIR) / "generated" / "greet-module.d.ts"));
  EXPECT_EQ(m.template_kind, TemplateKind::Module);
  EXPECT_FALSE(m.export_assignment);
  EXPECT_EQ(m.scope.functions.size(), 2u);
}

TEST(Parse, ExportAssignedNamespaceIsHoisted)
{
  const auto m = parse("declare namespace N {\n    function a(): void;\n}\nexport = N;\n");
  EXPECT_EQ(m.template_kind, TemplateKind::Module);
  EXPECT_FALSE(m.export_assignment);
  EXPECT_NE(m.scope.find_function("a"), nullptr);
  EXPECT_TRUE(m.scope.namespaces.empty());
}

TEST(Parse, AliasedPropertyBecomesMethod)
{
  const auto m = normalize(expand_aliases(dt("steamid")));
  const auto & cls = m.scope.classes.at(0);
  EXPECT_TRUE(m.scope.aliases.empty());
  EXPECT_TRUE(cls.properties.empty());
  const auto it = std::find_if(cls.methods.begin(), cls.methods.end(),
                               [](const FunctionDecl & f) { return f.name == "getSteam2RenderedID"; });
  ASSERT_NE(it, cls.methods.end());
  ASSERT_EQ(it->overloads.size(), 1u);
  EXPECT_TRUE(it->overloads[0].params.at(0).optional);
  EXPECT_EQ(render(it->overloads[0].return_type), "string");
}

TEST(Parse, OverloadsAccumulate)
{
  const auto m = parse("export function f(a: string): string;\nexport function f(a: number): number;\n");
  ASSERT_EQ(m.scope.functions.size(), 1u);
  EXPECT_EQ(m.scope.functions[0].overloads.size(), 2u);
}

TEST(Parse, ErrorsCarryPosition)
{
  try {
    parse("declare function f(: string): void;\n");
    FAIL() << "no error";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 20);
  }
  try {
    parse("export function a(): void;\n\nexport function b(x: string;\n");
    FAIL() << "no error";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse("declare function f(): void;\nexport = f;\nexport = f;\n"), ParseError);
  EXPECT_THROW(parse("declare function f(): void {}"), ParseError);
}

TEST(Parse, UnsupportedSyntaxIsRecordedNotRejected)
{
  for (const char * source : {"import x = require('x');\nexport function f(): void;\n",
                              "export default function f(): void;\n",
                              "declare enum E { A, B }\n",
                              "declare module \"x\" {\n    export function f(): void;\n}\n",
                              "/// <reference types=\"node\" />\nexport function f(): void;\n"}) {
    const auto m = parse(source);
    EXPECT_FALSE(m.unsupported.empty()) << source;
    EXPECT_TRUE(m.feature_tags.contains(FeatureTag::UnsupportedSyntax)) << source;
  }
  const auto plain = parse("export function f(): void;\n");
  EXPECT_TRUE(plain.unsupported.empty());
}

TEST(Parse, ExportOfAVariableIsUnsupported)
{
  const auto m = parse("declare const x: number;\nexport = x;\n");
  EXPECT_TRUE(m.feature_tags.contains(FeatureTag::UnsupportedSyntax));
}

TEST(ParseType, Forms)
{
  EXPECT_EQ(render(parse_type("string | number")), "string | number");
  EXPECT_EQ(render(canonicalize(parse_type("number | string"))), "string | number");
  EXPECT_EQ(render(parse_type("Array<string>")), "string[]");
  EXPECT_EQ(render(parse_type("(string | null)[]")), "(string | null)[]");
  EXPECT_EQ(render(parse_type("(err: Error | null, n?: number) => void")), "(err: Error | null, n?: number) => void");
  EXPECT_EQ(render(parse_type("{ a: string; b?: number }")), "{ a: string; b?: number; }");
  EXPECT_TRUE(parse_type("'x' | 'y'").is(TsType::Kind::Union));
  EXPECT_TRUE(parse_type("[string, number]").is(TsType::Kind::Tuple));
  EXPECT_TRUE(parse_type("A & B").is(TsType::Kind::Intersection));
  EXPECT_TRUE(parse_type("keyof T").is(TsType::Kind::Opaque));
  EXPECT_THROW(parse_type("string |"), ParseError);
  EXPECT_THROW(parse_type("string number"), ParseError);
}

TEST(ExpandAliases, SubstitutesAndRemoves)
{
  const auto m = expand_aliases(dt("union-alias"));
  EXPECT_TRUE(m.scope.aliases.empty());
  EXPECT_EQ(render(m.scope.find_function("format")->overloads[0].params[0].type), "string | number");
}

TEST(ExpandAliases, GenericAliases)
{
  const auto m = expand_aliases(parse("type Box<T> = { value: T };\nexport function f(b: Box<string>): Box<number>;\n"));
  const auto & sig = m.scope.functions.at(0).overloads.at(0);
  EXPECT_EQ(render(sig.params[0].type), "{ value: string; }");
  EXPECT_EQ(render(sig.return_type), "{ value: number; }");
}

TEST(ExpandAliases, AliasOfAlias)
{
  const auto m = expand_aliases(parse("type A = B | null;\ntype B = string;\nexport function f(a: A): void;\n"));
  EXPECT_EQ(render(m.scope.functions.at(0).overloads.at(0).params[0].type), "string | null");
}

TEST(ExpandAliases, CycleIsAnError)
{
  const auto m = parse("type A = B[];\ntype B = A | string;\nexport function f(a: A): void;\n");
  try {
    expand_aliases(m);
    FAIL() << "no error";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 0);
  }
}

TEST(ExpandAliases, Idempotent)
{
  for (const char * name : {"steamid", "union-alias", "carlo"}) {
    const auto once = expand_aliases(dt(name));
    EXPECT_TRUE(equivalent(normalize(once), normalize(expand_aliases(once)))) << name;
  }
}

TEST(FeatureTags, Fixtures)
{
  auto tags = [](const DeclarationModule & m) {
    std::vector<std::string> out;
    for (auto t : m.feature_tags) out.emplace_back(tag_name(t));
    return out;
  };
  using V = std::vector<std::string>;
  EXPECT_EQ(tags(dt("abs-optional")), (V{"type-string", "optional-parameter"}));
  EXPECT_EQ(tags(dt("dirname-regex")), V{});
  EXPECT_EQ(tags(dt("is-uuid")), (V{"type-string", "type-boolean"}));
  EXPECT_EQ(tags(dt("smart-truncate")), (V{"type-string", "type-number"}));
  EXPECT_EQ(tags(dt("timer")), (V{"type-boolean", "type-number", "type-void", "type-function", "type-array"}));
  EXPECT_EQ(tags(dt("steamid")), (V{"type-string", "optional-parameter", "type-boolean", "type-number", "type-union",
                                    "type-function", "alias-type"}));
  EXPECT_EQ(tags(dt("tuple-merge")), (V{"type-string", "type-number", "type-intersection", "type-tuple"}));
}

TEST(FeatureTags, ModifiersAndSignatures)
{
  const auto m = parse(
      "declare class C<T> {\n"
      "    static make(): C<string>;\n"
      "    private secret: string;\n"
      "    protected guard(): void;\n"
      "    public open(...rest: any[]): void;\n"
      "    readonly id: number;\n"
      "}\n"
      "export = C;\n");
  for (auto t : {FeatureTag::GenericsClass, FeatureTag::Static, FeatureTag::Private, FeatureTag::Protected,
                 FeatureTag::Public, FeatureTag::Readonly, FeatureTag::DotDotDotToken, FeatureTag::TypeAny}) {
    EXPECT_TRUE(m.feature_tags.contains(t)) << tag_name(t);
  }
  const auto i = parse("export interface I<T> {\n    (x: T): void;\n    [k: string]: T;\n}\n");
  for (auto t : {FeatureTag::GenericsInterface, FeatureTag::CallSignature, FeatureTag::IndexSignature}) {
    EXPECT_TRUE(i.feature_tags.contains(t)) << tag_name(t);
  }
}

TEST(Parse, RoundTripsEmittedFigures)
{
  for (const auto & entry : fs::directory_iterator(fs::path(FIXTURE_DIR) / "generated")) {
    SCOPED_TRACE(entry.path().filename().string());
    const auto first = normalize(parse(read(entry.path())));
    const auto again = normalize(parse(emit(first)));
    EXPECT_TRUE(equivalent(first, again));
  }
}

}  // namespace
}  // namespace dtsgen
