#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtsgen/trace.hpp"

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

Trace fixture(const std::string & name)
{
  return load_trace(read(fs::path(FIXTURE_DIR) / "traces" / (name + ".json")));
}

std::string wrap(const std::string & functions)
{
  return R"({"schemaVersion": 1, "functions": )" + functions + "}";
}

TEST(RuntimeType, ParsesBareKinds)
{
  for (const char * text : {"string", "number", "boolean", "undefined", "null", "function", "array", "object"}) {
    const auto t = RuntimeType::parse(text);
    EXPECT_EQ(t.str(), text);
    EXPECT_TRUE(t.detail.empty());
  }
}

TEST(RuntimeType, DetailForms)
{
  const auto regexp = RuntimeType::parse("object:RegExp");
  EXPECT_EQ(regexp.kind, RuntimeType::Kind::Object);
  EXPECT_EQ(regexp.constructor_name(), "RegExp");

  const auto nested = RuntimeType::parse("array:array:object:Date");
  ASSERT_TRUE(nested.element());
  ASSERT_TRUE(nested.element()->element());
  EXPECT_EQ(nested.element()->element()->constructor_name(), "Date");

  const auto fn = RuntimeType::parse("function:functionId_7");
  EXPECT_EQ(fn.linked_function(), "functionId_7");
  EXPECT_FALSE(RuntimeType::parse("array").element());
}

TEST(RuntimeType, RejectsMalformed)
{
  EXPECT_THROW(RuntimeType::parse("symbol"), TraceError);
  EXPECT_THROW(RuntimeType::parse("string:x"), TraceError);
  EXPECT_THROW(RuntimeType::parse("object:"), TraceError);
  EXPECT_THROW(RuntimeType::parse("array:bigint"), TraceError);
}

TEST(FunctionIdLess, NaturalOrder)
{
  FunctionIdLess less;
  EXPECT_TRUE(less("functionId_2", "functionId_10"));
  EXPECT_FALSE(less("functionId_10", "functionId_2"));
  EXPECT_TRUE(less("functionId_9", "functionId_10"));
  EXPECT_FALSE(less("functionId_3", "functionId_3"));
}

TEST(LoadTrace, PaperGetFieldListing)
{
  const Trace t = fixture("get-field");
  ASSERT_EQ(t.functions.size(), 1u);
  const auto & foo = t.functions.at("functionId_1");
  EXPECT_EQ(foo.function_name, "foo");
  const auto & hello = foo.args.at(0);
  EXPECT_EQ(hello.argument_name, "hello");
  ASSERT_EQ(hello.interactions.size(), 1u);
  const auto & get = hello.interactions[0];
  EXPECT_EQ(get.code, Interaction::Code::GetField);
  EXPECT_EQ(get.field, "world");
  EXPECT_EQ(get.return_type_of->kind, RuntimeType::Kind::String);
  EXPECT_TRUE(get.following.empty());
}

TEST(LoadTrace, PaperMethodCallListing)
{
  const Trace t = fixture("method-call");
  const auto & call = t.functions.at("functionId_1").args.at(0).interactions.at(0);
  EXPECT_EQ(call.code, Interaction::Code::MethodCall);
  EXPECT_EQ(call.method_name, "hello");
  EXPECT_EQ(call.function_id, "functionId_2");
  ASSERT_EQ(call.following.size(), 1u);
  EXPECT_EQ(call.following[0].field, "world");
}

TEST(LoadTrace, EmptyObjectIsEmptyTrace)
{
  EXPECT_TRUE(load_trace("{}").empty());
  EXPECT_TRUE(load_trace(wrap("{}")).empty());
}

TEST(LoadTrace, PadsInvocationsWithUndefined)
{
  const Trace t = fixture("glob-to-regexp");
  for (const auto & inv : t.functions.at("functionId_1").invocations) {
    ASSERT_EQ(inv.argument_types.size(), 2u);
  }
  EXPECT_EQ(t.functions.at("functionId_1").invocations[0].argument_types[1].kind, RuntimeType::Kind::Undefined);
}

TEST(LoadTrace, AcceptsOperatorInteractions)
{
  const Trace t = load_trace(wrap(R"({"functionId_1": {"functionName": "f", "isExported": true,
    "requiredModule": "f", "args": {"0": {"argumentName": "a", "argumentIndex": 0, "interactions": [
      {"code": "binaryOperation", "operator": "=="}, {"code": "unaryOperation", "operator": "typeof"}]}},
    "invocations": [{"argumentRuntimeTypes": ["number"], "returnRuntimeType": "boolean"}]}})"));
  const auto & in = t.functions.at("functionId_1").args.at(0).interactions;
  ASSERT_EQ(in.size(), 2u);
  EXPECT_EQ(in[0].code, Interaction::Code::BinaryOperation);
  EXPECT_EQ(in[1].operator_name, "typeof");
}

struct BadTrace
{
  const char * label;
  const char * functions;
};

class LoadTraceRejects : public testing::TestWithParam<BadTrace>
{
};

TEST_P(LoadTraceRejects, Throws)
{
  EXPECT_THROW(load_trace(wrap(GetParam().functions)), TraceError) << GetParam().label;
}

INSTANTIATE_TEST_SUITE_P(
    Schema, LoadTraceRejects,
    testing::Values(
        BadTrace{"unknown code", R"({"functionId_1": {"functionName": "f", "args": {"0": {"argumentName": "a",
          "interactions": [{"code": "setField", "field": "x"}]}}}})"},
        BadTrace{"unknown runtime kind", R"({"functionId_1": {"functionName": "f",
          "invocations": [{"argumentRuntimeTypes": ["symbol"], "returnRuntimeType": "undefined"}]}})"},
        BadTrace{"dangling method link", R"({"functionId_1": {"functionName": "f", "args": {"0": {"argumentName": "a",
          "interactions": [{"code": "methodCall", "methodName": "m", "functionId": "functionId_9"}]}}}})"},
        BadTrace{"dangling function type", R"({"functionId_1": {"functionName": "f", "args": {"0": {"argumentName": "a"}},
          "invocations": [{"argumentRuntimeTypes": ["function:functionId_4"], "returnRuntimeType": "undefined"}]}})"},
        BadTrace{"field on wrong code", R"({"functionId_1": {"functionName": "f", "args": {"0": {"argumentName": "a",
          "interactions": [{"code": "getField", "field": "x", "returnTypeOf": "string", "methodName": "y"}]}}}})"},
        BadTrace{"index mismatch", R"({"functionId_1": {"functionName": "f",
          "args": {"0": {"argumentName": "a", "argumentIndex": 1}}}})"},
        BadTrace{"supplied argument without container", R"({"functionId_1": {"functionName": "f",
          "invocations": [{"argumentRuntimeTypes": ["string"], "returnRuntimeType": "undefined"}]}})"},
        BadTrace{"method call cycle", R"({
          "functionId_1": {"functionName": "a", "args": {"0": {"argumentName": "x",
            "interactions": [{"code": "methodCall", "methodName": "m", "functionId": "functionId_2"}]}}},
          "functionId_2": {"functionName": "b", "args": {"0": {"argumentName": "y",
            "interactions": [{"code": "methodCall", "methodName": "n", "functionId": "functionId_1"}]}}}})"},
        BadTrace{"not an object", R"([])"}),
    [](const testing::TestParamInfo<BadTrace> & info) {
      std::string name = info.param.label;
      for (auto & c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
      }
      return name;
    });

TEST(LoadTrace, RejectsTooDeepNesting)
{
  std::string inner = R"({"code": "getField", "field": "x", "returnTypeOf": "object"})";
  for (int i = 0; i < kMaxInteractionDepth + 1; ++i) {
    inner = R"({"code": "getField", "field": "x", "returnTypeOf": "object", "followingInteractions": [)" + inner + "]}";
  }
  const std::string text =
      R"({"functionId_1": {"functionName": "f", "args": {"0": {"argumentName": "a", "interactions": [)" + inner +
      "]}}}}";
  EXPECT_THROW(load_trace(wrap(text)), TraceError);
}

TEST(LoadTrace, RejectsMalformedJson) { EXPECT_THROW(load_trace("{\"functions\": "), TraceError); }

TEST(SaveTrace, RoundTripsEveryFixture)
{
  for (const auto & entry : fs::directory_iterator(fs::path(FIXTURE_DIR) / "traces")) {
    SCOPED_TRACE(entry.path().filename().string());
    const Trace t = load_trace(read(entry.path()));
    const std::string saved = save_trace(t);
    EXPECT_EQ(load_trace(saved), t);
    EXPECT_EQ(save_trace(load_trace(saved)), saved);
  }
}

TEST(MergeTraces, MatchesContainersAndAppendsInvocations)
{
  const Trace a = fixture("abs");
  const Trace merged = merge_traces(a, a);
  ASSERT_EQ(merged.functions.size(), 1u);
  EXPECT_EQ(merged.functions.at("functionId_1").invocations.size(), 6u);
}

TEST(MergeTraces, RenumbersUnmatchedContainers)
{
  const Trace merged = merge_traces(fixture("abs"), fixture("method-call"));
  ASSERT_EQ(merged.functions.size(), 3u);
  // The callee link follows its container to the new id.
  const FunctionContainer * foo = nullptr;
  for (const auto & [id, fn] : merged.functions) {
    if (fn.function_name == "foo") foo = &fn;
  }
  ASSERT_NE(foo, nullptr);
  const std::string callee = foo->args.at(0).interactions.at(0).function_id;
  ASSERT_NE(merged.find(callee), nullptr);
  EXPECT_EQ(merged.find(callee)->function_name, "hello");
  EXPECT_NO_THROW(validate(merged));
}

TEST(MergeTraces, PadsToTheWiderArity)
{
  const Trace merged = merge_traces(fixture("glob-to-regexp-2"), fixture("abs"));
  for (const auto & [id, fn] : merged.functions) {
    for (const auto & inv : fn.invocations) EXPECT_EQ(inv.argument_types.size(), fn.arity());
  }
}

}  // namespace
}  // namespace dtsgen
