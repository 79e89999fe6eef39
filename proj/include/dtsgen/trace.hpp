// trace.hpp - run-time interaction traces recorded by the JavaScript tracer
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dtsgen
{

class TraceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The run-time type of a value as observed by the tracer.
///
/// Textual form (used throughout the JSON schema): the bare kind (`"string"`),
/// or `kind:detail` where detail is the constructor name for objects
/// (`"object:RegExp"`), the element type of index 0 for arrays
/// (`"array:string"`, `"array:object:Date"`) and the linked container for
/// functions (`"function:functionId_3"`).
struct RuntimeType
{
  enum class Kind : std::uint8_t { String, Number, Boolean, Undefined, Null, Function, Array, Object };

  Kind kind = Kind::Undefined;
  std::string detail;

  static RuntimeType parse(std::string_view text);
  [[nodiscard]] std::string str() const;

  [[nodiscard]] std::string constructor_name() const
  {
    return kind == Kind::Object ? detail : std::string{};
  }
  [[nodiscard]] std::optional<RuntimeType> element() const;
  [[nodiscard]] std::string linked_function() const
  {
    return kind == Kind::Function ? detail : std::string{};
  }

  bool operator==(const RuntimeType &) const = default;
};

struct Interaction
{
  enum class Code : std::uint8_t {
    GetField,
    MethodCall,
    UsedAsArgument,
    BinaryOperation,  // accepted on load, ignored by inference
    UnaryOperation,   // accepted on load, ignored by inference
  };

  Code code = Code::GetField;
  std::string field;                    // GetField
  std::string method_name;              // MethodCall
  std::string function_id;              // MethodCall: callee container
  std::optional<RuntimeType> return_type_of;  // GetField
  std::string callee_function_id;       // UsedAsArgument, optional
  std::string operator_name;            // Binary/UnaryOperation
  std::vector<Interaction> following;   // GetField and MethodCall

  bool operator==(const Interaction &) const = default;
};

std::string_view code_name(Interaction::Code code);

struct ArgumentContainer
{
  std::string argument_name;
  int argument_index = 0;
  std::vector<Interaction> interactions;

  bool operator==(const ArgumentContainer &) const = default;
};

struct InvocationRecord
{
  std::vector<RuntimeType> argument_types;
  RuntimeType return_type;

  bool operator==(const InvocationRecord &) const = default;
};

struct FunctionContainer
{
  std::string function_name;
  bool is_exported = false;
  bool is_constructor = false;
  bool is_instance_member = false;  // invoked on an instance rather than the exported value
  std::string required_module;
  std::map<int, ArgumentContainer> args;
  std::vector<InvocationRecord> invocations;

  /// Largest padded arity over invocations and observed argument containers.
  [[nodiscard]] std::size_t arity() const;

  bool operator==(const FunctionContainer &) const = default;
};

/// Orders `functionId_2` before `functionId_10`.
struct FunctionIdLess
{
  bool operator()(const std::string & a, const std::string & b) const;
};

struct Trace
{
  std::map<std::string, FunctionContainer, FunctionIdLess> functions;

  [[nodiscard]] bool empty() const { return functions.empty(); }
  [[nodiscard]] const FunctionContainer * find(const std::string & id) const;

  bool operator==(const Trace &) const = default;
};

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr int kMaxInteractionDepth = 64;

/// Parses and validates trace JSON. Accepts the versioned envelope
/// `{"schemaVersion": 1, "functions": {...}}` as well as a bare
/// `{"functionId_1": {...}}` map. Throws TraceError.
Trace load_trace(std::string_view json_text);

/// Canonical JSON: sorted keys, stable ordering, envelope included.
std::string save_trace(const Trace & trace);

/// Validates the invariants load_trace enforces. Throws TraceError.
void validate(const Trace & trace);

/// Container-wise union of two traces (one per executed example). Containers
/// are matched by name, module and flags; ids are renumbered.
Trace merge_traces(const Trace & a, const Trace & b);

}  // namespace dtsgen
