#include "dtsgen/trace.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

namespace dtsgen
{

namespace
{

using json = nlohmann::json;

struct KindName
{
  RuntimeType::Kind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {RuntimeType::Kind::String, "string"},       {RuntimeType::Kind::Number, "number"},
    {RuntimeType::Kind::Boolean, "boolean"},     {RuntimeType::Kind::Undefined, "undefined"},
    {RuntimeType::Kind::Null, "null"},           {RuntimeType::Kind::Function, "function"},
    {RuntimeType::Kind::Array, "array"},         {RuntimeType::Kind::Object, "object"},
};

struct CodeName
{
  Interaction::Code code;
  std::string_view name;
};

constexpr CodeName kCodeNames[] = {
    {Interaction::Code::GetField, "getField"},
    {Interaction::Code::MethodCall, "methodCall"},
    {Interaction::Code::UsedAsArgument, "usedAsArgument"},
    {Interaction::Code::BinaryOperation, "binaryOperation"},
    {Interaction::Code::UnaryOperation, "unaryOperation"},
};

[[noreturn]] void fail(const std::string & where, const std::string & what)
{
  throw TraceError(where.empty() ? what : where + ": " + what);
}

const json & require(const json & obj, const char * key, const std::string & where)
{
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const json & obj, const char * key, const std::string & where,
                       bool required = false)
{
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) fail(where, std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) fail(where, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

bool get_bool(const json & obj, const char * key, const std::string & where)
{
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_boolean()) fail(where, std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

RuntimeType runtime_type_at(const json & value, const std::string & where)
{
  if (!value.is_string()) fail(where, "runtime type must be a string");
  try {
    return RuntimeType::parse(value.get<std::string>());
  } catch (const TraceError & e) {
    fail(where, e.what());
  }
}

Interaction parse_interaction(const json & j, const std::string & where, int depth)
{
  if (depth > kMaxInteractionDepth) {
    fail(where, "followingInteractions nested deeper than " + std::to_string(kMaxInteractionDepth) +
                    " (cyclic?)");
  }
  if (!j.is_object()) fail(where, "interaction must be an object");
  const std::string code_text = get_string(j, "code", where, true);
  auto code = std::find_if(std::begin(kCodeNames), std::end(kCodeNames),
                           [&](const CodeName & c) { return c.name == code_text; });
  if (code == std::end(kCodeNames)) fail(where, "unknown interaction code '" + code_text + "'");

  Interaction out;
  out.code = code->code;

  std::set<std::string> allowed{"code"};
  switch (out.code) {
    case Interaction::Code::GetField:
      allowed.insert({"field", "returnTypeOf", "followingInteractions"});
      out.field = get_string(j, "field", where, true);
      out.return_type_of = runtime_type_at(require(j, "returnTypeOf", where), where);
      break;
    case Interaction::Code::MethodCall:
      allowed.insert({"methodName", "functionId", "followingInteractions"});
      out.method_name = get_string(j, "methodName", where, true);
      out.function_id = get_string(j, "functionId", where);
      break;
    case Interaction::Code::UsedAsArgument:
      allowed.insert("calleeFunctionId");
      out.callee_function_id = get_string(j, "calleeFunctionId", where);
      break;
    case Interaction::Code::BinaryOperation:
    case Interaction::Code::UnaryOperation:
      allowed.insert("operator");
      out.operator_name = get_string(j, "operator", where);
      break;
  }
  for (const auto & [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      fail(where, "field '" + key + "' is not valid for a " + code_text + " interaction");
    }
  }

  if (auto it = j.find("followingInteractions"); it != j.end()) {
    if (!it->is_array()) fail(where, "followingInteractions must be an array");
    std::size_t i = 0;
    for (const auto & f : *it) {
      out.following.push_back(
          parse_interaction(f, where + ".followingInteractions[" + std::to_string(i++) + "]", depth + 1));
    }
  }
  return out;
}

int parse_index(const std::string & key, const std::string & where)
{
  if (key.empty() || key.size() > 6 ||
      !std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    fail(where, "argument key '" + key + "' is not a non-negative integer");
  }
  return std::stoi(key);
}

FunctionContainer parse_container(const json & j, const std::string & where)
{
  if (!j.is_object()) fail(where, "function container must be an object");
  FunctionContainer out;
  out.function_name = get_string(j, "functionName", where);
  out.is_exported = get_bool(j, "isExported", where);
  out.is_constructor = get_bool(j, "isConstructor", where);
  out.is_instance_member = get_bool(j, "isInstanceMember", where);
  out.required_module = get_string(j, "requiredModule", where);

  if (auto it = j.find("args"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) fail(where, "args must be an object keyed by argument index");
    for (const auto & [key, value] : it->items()) {
      const std::string arg_where = where + ".args." + key;
      const int index = parse_index(key, arg_where);
      if (!value.is_object()) fail(arg_where, "argument container must be an object");
      ArgumentContainer arg;
      arg.argument_name = get_string(value, "argumentName", arg_where);
      arg.argument_index = index;
      if (auto ix = value.find("argumentIndex"); ix != value.end()) {
        if (!ix->is_number_integer() || ix->get<int>() != index) {
          fail(arg_where, "argumentIndex does not match its key");
        }
      }
      if (auto inter = value.find("interactions"); inter != value.end()) {
        if (!inter->is_array()) fail(arg_where, "interactions must be an array");
        std::size_t i = 0;
        for (const auto & ij : *inter) {
          arg.interactions.push_back(
              parse_interaction(ij, arg_where + ".interactions[" + std::to_string(i++) + "]", 0));
        }
      }
      out.args.emplace(index, std::move(arg));
    }
  }

  if (auto it = j.find("invocations"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) fail(where, "invocations must be an array");
    std::size_t i = 0;
    for (const auto & inv : *it) {
      const std::string inv_where = where + ".invocations[" + std::to_string(i++) + "]";
      if (!inv.is_object()) fail(inv_where, "invocation must be an object");
      InvocationRecord record;
      if (auto types = inv.find("argumentRuntimeTypes"); types != inv.end()) {
        if (!types->is_array()) fail(inv_where, "argumentRuntimeTypes must be an array");
        for (const auto & t : *types) record.argument_types.push_back(runtime_type_at(t, inv_where));
      }
      if (auto ret = inv.find("returnRuntimeType"); ret != inv.end()) {
        record.return_type = runtime_type_at(*ret, inv_where);
      }
      out.invocations.push_back(std::move(record));
    }
  }

  const std::size_t arity = out.arity();
  for (auto & inv : out.invocations) {
    inv.argument_types.resize(arity, RuntimeType{});
  }
  return out;
}

json runtime_json(const RuntimeType & t) { return t.str(); }

json interaction_json(const Interaction & in)
{
  json out;
  out["code"] = std::string(code_name(in.code));
  switch (in.code) {
    case Interaction::Code::GetField:
      out["field"] = in.field;
      out["returnTypeOf"] = in.return_type_of ? in.return_type_of->str() : std::string("undefined");
      break;
    case Interaction::Code::MethodCall:
      out["methodName"] = in.method_name;
      if (!in.function_id.empty()) out["functionId"] = in.function_id;
      break;
    case Interaction::Code::UsedAsArgument:
      if (!in.callee_function_id.empty()) out["calleeFunctionId"] = in.callee_function_id;
      break;
    case Interaction::Code::BinaryOperation:
    case Interaction::Code::UnaryOperation:
      if (!in.operator_name.empty()) out["operator"] = in.operator_name;
      break;
  }
  if (in.code == Interaction::Code::GetField || in.code == Interaction::Code::MethodCall) {
    json following = json::array();
    for (const auto & f : in.following) following.push_back(interaction_json(f));
    out["followingInteractions"] = std::move(following);
  }
  return out;
}

void for_each_interaction(const std::vector<Interaction> & list,
                          const std::function<void(const Interaction &, int)> & fn, int depth = 0)
{
  for (const auto & in : list) {
    fn(in, depth);
    for_each_interaction(in.following, fn, depth + 1);
  }
}

void for_each_interaction_mut(std::vector<Interaction> & list,
                              const std::function<void(Interaction &)> & fn)
{
  for (auto & in : list) {
    fn(in);
    for_each_interaction_mut(in.following, fn);
  }
}

void remap_runtime(RuntimeType & t, const std::map<std::string, std::string> & ids)
{
  if (t.kind == RuntimeType::Kind::Function && !t.detail.empty()) {
    if (auto it = ids.find(t.detail); it != ids.end()) t.detail = it->second;
  } else if (t.kind == RuntimeType::Kind::Array && !t.detail.empty()) {
    RuntimeType elem = RuntimeType::parse(t.detail);
    remap_runtime(elem, ids);
    t.detail = elem.str();
  }
}

void remap_interactions(std::vector<Interaction> & list, const std::map<std::string, std::string> & ids)
{
  for_each_interaction_mut(list, [&](Interaction & in) {
    if (auto it = ids.find(in.function_id); it != ids.end()) in.function_id = it->second;
    if (auto it = ids.find(in.callee_function_id); it != ids.end()) in.callee_function_id = it->second;
    if (in.return_type_of) remap_runtime(*in.return_type_of, ids);
  });
}

auto container_key(const FunctionContainer & c)
{
  return std::make_tuple(c.function_name, c.required_module, c.is_exported, c.is_constructor,
                         c.is_instance_member);
}

}  // namespace

// ---------------------------------------------------------------------------

RuntimeType RuntimeType::parse(std::string_view text)
{
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  auto it = std::find_if(std::begin(kKindNames), std::end(kKindNames),
                         [&](const KindName & k) { return k.name == head; });
  if (it == std::end(kKindNames)) {
    throw TraceError("unknown runtime type '" + std::string(text) + "'");
  }
  RuntimeType out;
  out.kind = it->kind;
  if (colon != std::string_view::npos) {
    out.detail = std::string(text.substr(colon + 1));
    if (out.kind != Kind::Object && out.kind != Kind::Array && out.kind != Kind::Function) {
      throw TraceError("runtime type '" + std::string(head) + "' takes no detail");
    }
    if (out.detail.empty()) throw TraceError("empty detail in runtime type '" + std::string(text) + "'");
    if (out.kind == Kind::Array) (void)RuntimeType::parse(out.detail);
  }
  return out;
}

std::string RuntimeType::str() const
{
  std::string out;
  for (const auto & k : kKindNames) {
    if (k.kind == kind) out = std::string(k.name);
  }
  if (!detail.empty()) out += ":" + detail;
  return out;
}

std::optional<RuntimeType> RuntimeType::element() const
{
  if (kind != Kind::Array || detail.empty()) return std::nullopt;
  return RuntimeType::parse(detail);
}

std::string_view code_name(Interaction::Code code)
{
  for (const auto & c : kCodeNames) {
    if (c.code == code) return c.name;
  }
  return "getField";
}

std::size_t FunctionContainer::arity() const
{
  std::size_t n = args.empty() ? 0 : static_cast<std::size_t>(args.rbegin()->first) + 1;
  for (const auto & inv : invocations) n = std::max(n, inv.argument_types.size());
  return n;
}

bool FunctionIdLess::operator()(const std::string & a, const std::string & b) const
{
  auto split = [](const std::string & s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return std::make_pair(s.substr(0, i), s.substr(i));
  };
  const auto [pa, na] = split(a);
  const auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na.size() != nb.size()) return na.size() < nb.size();
  return na < nb;
}

const FunctionContainer * Trace::find(const std::string & id) const
{
  auto it = functions.find(id);
  return it == functions.end() ? nullptr : &it->second;
}

void validate(const Trace & trace)
{
  std::map<std::string, std::set<std::string>> callees;
  for (const auto & [id, fn] : trace.functions) {
    const std::string where = id;
    for (const auto & [index, arg] : fn.args) {
      if (index < 0) fail(where, "negative argument index");
      if (arg.argument_index != index) fail(where, "argumentIndex does not match its key");
      for_each_interaction(arg.interactions, [&](const Interaction & in, int depth) {
        if (depth > kMaxInteractionDepth) fail(where, "followingInteractions nested too deeply");
        if (in.code == Interaction::Code::MethodCall && !in.function_id.empty()) {
          if (!trace.find(in.function_id)) fail(where, "dangling functionId '" + in.function_id + "'");
          callees[id].insert(in.function_id);
        }
        if (in.code == Interaction::Code::UsedAsArgument && !in.callee_function_id.empty() &&
            !trace.find(in.callee_function_id)) {
          fail(where, "dangling calleeFunctionId '" + in.callee_function_id + "'");
        }
        if (in.return_type_of) {
          std::optional<RuntimeType> t = in.return_type_of;
          while (t) {
            if (!t->linked_function().empty() && !trace.find(t->linked_function())) {
              fail(where, "dangling function link '" + t->linked_function() + "'");
            }
            t = t->element();
          }
        }
      });
    }

    const std::size_t arity = fn.arity();
    for (const auto & inv : fn.invocations) {
      if (inv.argument_types.size() != arity) {
        fail(where, "invocation not padded to the container arity");
      }
      for (const auto & t : inv.argument_types) {
        if (!t.linked_function().empty() && !trace.find(t.linked_function())) {
          fail(where, "dangling function link '" + t.linked_function() + "'");
        }
      }
    }
    for (std::size_t i = 0; i < arity; ++i) {
      if (fn.args.contains(static_cast<int>(i))) continue;
      for (const auto & inv : fn.invocations) {
        if (inv.argument_types[i].kind != RuntimeType::Kind::Undefined) {
          fail(where, "argument " + std::to_string(i) + " was supplied but has no argument container");
        }
      }
    }
  }

  // methodCall links must not form a cycle.
  std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::function<void(const std::string &)> visit = [&](const std::string & id) {
    state[id] = 1;
    for (const auto & next : callees[id]) {
      if (state[next] == 1) fail(id, "cyclic methodCall link through '" + next + "'");
      if (state[next] == 0) visit(next);
    }
    state[id] = 2;
  };
  for (const auto & [id, fn] : trace.functions) {
    if (state[id] == 0) visit(id);
  }
}

Trace load_trace(std::string_view json_text)
{
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw TraceError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw TraceError("trace root must be a JSON object");

  const json * functions = &root;
  if (root.contains("functions")) {
    if (auto v = root.find("schemaVersion"); v != root.end()) {
      if (!v->is_number_integer() || v->get<int>() != kTraceSchemaVersion) {
        throw TraceError("unsupported schemaVersion " + v->dump());
      }
    }
    for (const auto & [key, value] : root.items()) {
      if (key != "functions" && key != "schemaVersion") {
        throw TraceError("unexpected top-level field '" + key + "'");
      }
    }
    functions = &root["functions"];
    if (!functions->is_object()) throw TraceError("'functions' must be an object");
  } else if (root.contains("schemaVersion")) {
    throw TraceError("envelope without 'functions'");
  }

  Trace trace;
  for (const auto & [id, value] : functions->items()) {
    trace.functions.emplace(id, parse_container(value, id));
  }
  validate(trace);
  return trace;
}

std::string save_trace(const Trace & trace)
{
  json functions = json::object();
  for (const auto & [id, fn] : trace.functions) {
    json c;
    c["functionName"] = fn.function_name;
    c["isExported"] = fn.is_exported;
    c["isConstructor"] = fn.is_constructor;
    c["isInstanceMember"] = fn.is_instance_member;
    c["requiredModule"] = fn.required_module;
    json args = json::object();
    for (const auto & [index, arg] : fn.args) {
      json a;
      a["argumentName"] = arg.argument_name;
      a["argumentIndex"] = arg.argument_index;
      json interactions = json::array();
      for (const auto & in : arg.interactions) interactions.push_back(interaction_json(in));
      a["interactions"] = std::move(interactions);
      args[std::to_string(index)] = std::move(a);
    }
    c["args"] = std::move(args);
    json invocations = json::array();
    for (const auto & inv : fn.invocations) {
      json types = json::array();
      for (const auto & t : inv.argument_types) types.push_back(runtime_json(t));
      invocations.push_back({{"argumentRuntimeTypes", std::move(types)},
                             {"returnRuntimeType", runtime_json(inv.return_type)}});
    }
    c["invocations"] = std::move(invocations);
    functions[id] = std::move(c);
  }
  json root;
  root["schemaVersion"] = kTraceSchemaVersion;
  root["functions"] = std::move(functions);
  return root.dump(2) + "\n";
}

Trace merge_traces(const Trace & a, const Trace & b)
{
  Trace out = a;

  std::size_t next_id = 1;
  auto fresh_id = [&] {
    std::string id;
    do {
      id = "functionId_" + std::to_string(next_id++);
    } while (out.functions.contains(id));
    return id;
  };

  // k-th container of b with a given key pairs with the k-th container of a with that key.
  std::map<decltype(container_key(FunctionContainer{})), std::vector<std::string>> a_by_key;
  for (const auto & [id, fn] : a.functions) a_by_key[container_key(fn)].push_back(id);

  std::map<std::string, std::string> ids;
  std::map<decltype(container_key(FunctionContainer{})), std::size_t> seen;
  for (const auto & [id, fn] : b.functions) {
    const auto key = container_key(fn);
    const std::size_t k = seen[key]++;
    auto it = a_by_key.find(key);
    if (it != a_by_key.end() && k < it->second.size()) {
      ids[id] = it->second[k];
    } else {
      ids[id] = fresh_id();
    }
  }

  for (const auto & [id, source] : b.functions) {
    FunctionContainer fn = source;
    for (auto & [index, arg] : fn.args) remap_interactions(arg.interactions, ids);
    for (auto & inv : fn.invocations) {
      for (auto & t : inv.argument_types) remap_runtime(t, ids);
      remap_runtime(inv.return_type, ids);
    }

    auto [slot, inserted] = out.functions.try_emplace(ids[id], fn);
    if (inserted) continue;
    FunctionContainer & target = slot->second;
    for (auto & [index, arg] : fn.args) {
      auto [existing, fresh] = target.args.try_emplace(index, arg);
      if (fresh) continue;
      if (existing->second.argument_name.empty()) existing->second.argument_name = arg.argument_name;
      existing->second.interactions.insert(existing->second.interactions.end(),
                                           arg.interactions.begin(), arg.interactions.end());
    }
    target.invocations.insert(target.invocations.end(), fn.invocations.begin(), fn.invocations.end());
    const std::size_t arity = target.arity();
    for (auto & inv : target.invocations) inv.argument_types.resize(arity, RuntimeType{});
  }
  return out;
}

}  // namespace dtsgen
