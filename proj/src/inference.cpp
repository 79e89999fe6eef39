#include "dtsgen/inference.hpp"

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace dtsgen
{

namespace
{

bool is_plain_object(const RuntimeType & t)
{
  return t.kind == RuntimeType::Kind::Object && (t.detail.empty() || t.detail == "Object");
}

std::set<std::string> member_keys(const TsType & t)
{
  std::set<std::string> keys;
  for (const auto & m : union_members(t)) keys.insert(canonical_key(m));
  return keys;
}

bool subset_related(const TsType & a, const TsType & b)
{
  const auto ka = member_keys(a);
  const auto kb = member_keys(b);
  return std::includes(ka.begin(), ka.end(), kb.begin(), kb.end()) ||
         std::includes(kb.begin(), kb.end(), ka.begin(), ka.end());
}

/// Shared state while converting one trace.
class Inferrer
{
public:
  Inferrer(const Trace & trace, int depth_limit) : trace_(trace), depth_limit_(depth_limit) {}

  TsType value_type(const RuntimeType & rt, const std::vector<Interaction> & interactions,
                    const std::string & path, int depth);

  std::vector<Field> shape_fields(const std::vector<Interaction> & interactions, const std::string & path,
                                  int depth);

  std::vector<CandidateSignature> candidates(const FunctionContainer & fn, std::size_t arity, int depth);

  std::vector<Signature> signatures(const std::vector<const FunctionContainer *> & group, int depth);

private:
  TsType object_shape(const std::vector<Interaction> & interactions, const std::string & path, int depth);
  TsType callback_for(const std::string & function_id, int depth);
  TsType method_type(const std::vector<std::string> & callee_ids, const std::vector<Interaction> & following,
                     const std::string & path, int depth);
  TsType return_type(const RuntimeType & rt, int depth);

  const Trace & trace_;
  int depth_limit_;
  std::set<std::string> active_callbacks_;
};

TsType Inferrer::value_type(const RuntimeType & rt, const std::vector<Interaction> & interactions,
                            const std::string & path, int depth)
{
  using K = RuntimeType::Kind;
  switch (rt.kind) {
    case K::String: return TsType::string();
    case K::Number: return TsType::number();
    case K::Boolean: return TsType::boolean();
    case K::Null: return TsType::null();
    case K::Undefined: return TsType::undefined();
    case K::Object:
      if (!is_plain_object(rt)) return TsType::named(rt.detail);
      return object_shape(interactions, path, depth);
    case K::Array: {
      auto elem = rt.element();
      if (!elem) return TsType::array(TsType{TsType::Kind::Unknown, {}, {}, {}, TsType::kNone});
      TsType e = value_type(*elem, {}, path, depth);
      if (e.is(TsType::Kind::Undefined)) e = TsType{TsType::Kind::Unknown, {}, {}, {}, TsType::kNone};
      return TsType::array(std::move(e));
    }
    case K::Function:
      if (!rt.linked_function().empty()) return callback_for(rt.linked_function(), depth);
      return TsType::callback({}, TsType::void_type());
  }
  return TsType::object();
}

TsType Inferrer::object_shape(const std::vector<Interaction> & interactions, const std::string & path, int depth)
{
  if (depth > depth_limit_) return TsType::object();
  std::vector<Field> fields = shape_fields(interactions, path, depth);
  if (fields.empty()) return TsType::object();
  TsType shape = TsType::object_literal(std::move(fields));
  shape.name = path;
  return shape;
}

std::vector<Field> Inferrer::shape_fields(const std::vector<Interaction> & interactions,
                                          const std::string & path, int depth)
{
  struct Group
  {
    bool method = false;
    std::vector<RuntimeType> types;
    std::vector<std::string> callees;
    std::vector<Interaction> following;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;
  auto group_for = [&](const std::string & name) -> Group & {
    if (!groups.contains(name)) order.push_back(name);
    return groups[name];
  };

  for (const auto & in : interactions) {
    if (in.code == Interaction::Code::MethodCall) {
      Group & g = group_for(in.method_name);
      g.method = true;
      if (!in.function_id.empty() &&
          std::find(g.callees.begin(), g.callees.end(), in.function_id) == g.callees.end()) {
        g.callees.push_back(in.function_id);
      }
      g.following.insert(g.following.end(), in.following.begin(), in.following.end());
    } else if (in.code == Interaction::Code::GetField) {
      Group & g = group_for(in.field);
      const RuntimeType rt = in.return_type_of.value_or(RuntimeType{});
      if (std::find(g.types.begin(), g.types.end(), rt) == g.types.end()) g.types.push_back(rt);
      g.following.insert(g.following.end(), in.following.begin(), in.following.end());
    }
  }

  std::vector<Field> fields;
  for (const auto & name : order) {
    const Group & g = groups[name];
    const std::string child = path + "__" + name;
    std::vector<TsType> members;
    if (g.method) {
      // A method read that is also called is described by its call.
      members.push_back(method_type(g.callees, g.following, child, depth));
      for (const auto & rt : g.types) {
        if (rt.kind != RuntimeType::Kind::Function) members.push_back(value_type(rt, g.following, child, depth + 1));
      }
    } else {
      for (const auto & rt : g.types) members.push_back(value_type(rt, g.following, child, depth + 1));
    }
    TsType type = make_union(std::move(members), ObjectMerge::Componentwise);
    Field f;
    f.name = name;
    if (contains_kind(type, TsType::Kind::Undefined)) {
      f.optional = true;
      type = remove_members(type, TsType::Kind::Undefined);
      if (type.is(TsType::Kind::Unspecified)) continue;
    }
    f.type = std::move(type);
    fields.push_back(std::move(f));
  }
  return fields;
}

TsType Inferrer::method_type(const std::vector<std::string> & callee_ids, const std::vector<Interaction> & following,
                             const std::string & path, int depth)
{
  std::vector<const FunctionContainer *> group;
  for (const auto & id : callee_ids) {
    if (const FunctionContainer * fn = trace_.find(id); fn && !fn->invocations.empty()) group.push_back(fn);
  }

  std::optional<TsType> shaped_return;
  if (!following.empty()) {
    TsType shape = object_shape(following, path, depth + 1);
    if (shape.is(TsType::Kind::ObjectLiteral)) shaped_return = std::move(shape);
  }

  std::vector<Signature> sigs;
  if (!group.empty() && active_callbacks_.size() < static_cast<std::size_t>(depth_limit_)) {
    sigs = signatures(group, depth + 1);
  }
  if (sigs.empty()) sigs.push_back(Signature{{}, {}, TsType::void_type()});

  std::vector<TsType> callbacks;
  for (auto & s : sigs) {
    TsType ret = shaped_return ? *shaped_return : s.return_type;
    callbacks.push_back(TsType::callback(std::move(s.params), std::move(ret)));
  }
  return make_union(std::move(callbacks));
}

TsType Inferrer::callback_for(const std::string & function_id, int depth)
{
  const FunctionContainer * fn = trace_.find(function_id);
  if (!fn || fn->invocations.empty() || active_callbacks_.contains(function_id) || depth > depth_limit_) {
    return TsType::callback({}, TsType::void_type());
  }
  active_callbacks_.insert(function_id);
  std::vector<Signature> sigs = signatures({fn}, depth + 1);
  active_callbacks_.erase(function_id);

  std::vector<TsType> callbacks;
  for (auto & s : sigs) callbacks.push_back(TsType::callback(std::move(s.params), std::move(s.return_type)));
  return make_union(std::move(callbacks));
}

TsType Inferrer::return_type(const RuntimeType & rt, int depth)
{
  using K = RuntimeType::Kind;
  switch (rt.kind) {
    case K::Undefined: return TsType::void_type();
    case K::Object: return is_plain_object(rt) ? TsType::object() : TsType::named(rt.detail);
    default: return value_type(rt, {}, "", depth);
  }
}

std::vector<CandidateSignature> Inferrer::candidates(const FunctionContainer & fn, std::size_t arity, int depth)
{
  std::vector<std::string> names(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    auto it = fn.args.find(static_cast<int>(i));
    names[i] = it != fn.args.end() && !it->second.argument_name.empty() ? it->second.argument_name
                                                                        : "arg" + std::to_string(i);
  }

  // One shape per position, aggregated over every call.
  std::map<std::size_t, TsType> shapes;
  auto shape_at = [&](std::size_t i) -> const TsType & {
    auto it = shapes.find(i);
    if (it != shapes.end()) return it->second;
    auto arg = fn.args.find(static_cast<int>(i));
    static const std::vector<Interaction> none;
    const auto & interactions = arg != fn.args.end() ? arg->second.interactions : none;
    return shapes.emplace(i, object_shape(interactions, "I__" + names[i], depth)).first->second;
  };

  // Null handling: observed null spreads over the non-null returns.
  std::vector<TsType> returns;
  std::set<std::string> non_null;
  bool null_seen = false;
  for (const auto & inv : fn.invocations) {
    returns.push_back(return_type(inv.return_type, depth));
    if (returns.back().is(TsType::Kind::Null)) {
      null_seen = true;
    } else {
      non_null.insert(canonical_key(returns.back()));
    }
  }
  if (null_seen && non_null.size() == 1) {
    TsType single;
    for (const auto & r : returns) {
      if (!r.is(TsType::Kind::Null)) single = r;
    }
    for (auto & r : returns) r = make_union({single, TsType::null()});
  } else if (null_seen) {
    for (auto & r : returns) {
      if (!r.is(TsType::Kind::Null)) r = make_union({r, TsType::null()});
    }
  }

  std::vector<CandidateSignature> out;
  for (std::size_t k = 0; k < fn.invocations.size(); ++k) {
    const auto & inv = fn.invocations[k];
    CandidateSignature sig;
    for (std::size_t i = 0; i < arity; ++i) {
      const RuntimeType rt = i < inv.argument_types.size() ? inv.argument_types[i] : RuntimeType{};
      Field p;
      p.name = names[i];
      p.type = is_plain_object(rt) ? shape_at(i) : value_type(rt, {}, "I__" + names[i], depth);
      sig.params.push_back(std::move(p));
    }
    sig.return_type = returns[k];
    out.push_back(std::move(sig));
  }
  return out;
}

std::vector<Signature> Inferrer::signatures(const std::vector<const FunctionContainer *> & group, int depth)
{
  std::size_t arity = 0;
  for (const auto * fn : group) arity = std::max(arity, fn->arity());
  std::vector<CandidateSignature> all;
  for (const auto * fn : group) {
    auto c = candidates(*fn, arity, depth);
    all.insert(all.end(), c.begin(), c.end());
  }
  if (all.empty()) return {};
  std::vector<Signature> out;
  for (const auto & s : merge_signatures(all)) out.push_back(finalize_parameters(s));
  return canonical_set(std::move(out));
}

/// Moves object shapes out of signatures into named interfaces.
class Hoister
{
public:
  explicit Hoister(std::string qualifier) : qualifier_(std::move(qualifier)) {}

  TsType hoist(const TsType & t)
  {
    TsType out = t;
    for (auto & a : out.args) a = hoist(a);
    for (auto & f : out.fields) f.type = hoist(f.type);
    if (!out.is(TsType::Kind::ObjectLiteral)) {
      if (out.is(TsType::Kind::Union)) return make_union(std::move(out.args));
      return out;
    }
    const std::string key = canonical_key(out);
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
      std::string name = out.name.empty() ? std::string("I__shape") : out.name;
      if (used_.contains(name)) {
        int n = 2;
        while (used_.contains(name + "__" + std::to_string(n))) ++n;
        name += "__" + std::to_string(n);
      }
      used_.insert(name);
      InterfaceDecl decl;
      decl.name = name;
      decl.properties = out.fields;
      interfaces_.push_back(std::move(decl));
      it = by_key_.emplace(key, name).first;
    }
    return TsType::named(qualifier_ + it->second);
  }

  void hoist(Signature & sig)
  {
    for (auto & p : sig.params) p.type = hoist(p.type);
    if (!sig.return_type.is(TsType::Kind::Unspecified)) sig.return_type = hoist(sig.return_type);
  }

  void hoist(FunctionDecl & fn)
  {
    for (auto & s : fn.overloads) hoist(s);
  }

  std::vector<InterfaceDecl> take() { return std::move(interfaces_); }

private:
  std::string qualifier_;
  std::map<std::string, std::string> by_key_;
  std::set<std::string> used_;
  std::vector<InterfaceDecl> interfaces_;
};

/// Containers grouped by function name, in order of first appearance.
std::vector<std::pair<std::string, std::vector<const FunctionContainer *>>> group_by_name(
    const std::vector<const FunctionContainer *> & containers)
{
  std::vector<std::pair<std::string, std::vector<const FunctionContainer *>>> groups;
  for (const auto * fn : containers) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto & g) { return g.first == fn->function_name; });
    if (it == groups.end()) {
      groups.push_back({fn->function_name, {fn}});
    } else {
      it->second.push_back(fn);
    }
  }
  return groups;
}

}  // namespace

std::string camelize(std::string_view module_name)
{
  if (auto slash = module_name.rfind('/'); slash != std::string_view::npos) {
    module_name = module_name.substr(slash + 1);
  }
  std::string out;
  bool head = true;
  for (char c : module_name) {
    if (c == '-' || c == '_' || c == '.') {
      head = true;
      continue;
    }
    out += head ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    head = false;
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "_" + out;
  return out;
}

TemplateKind select_template(const Trace & trace, const std::string & module_name)
{
  bool touched = false;
  for (const auto & [id, fn] : trace.functions) {
    if (fn.required_module != module_name) continue;
    touched = true;
    if (fn.is_exported && !fn.invocations.empty()) {
      return fn.is_constructor ? TemplateKind::ModuleClass : TemplateKind::ModuleFunction;
    }
  }
  if (!touched) throw InsufficientTrace("no function of module '" + module_name + "' was observed");
  return TemplateKind::Module;
}

std::optional<InterfaceShape> build_interface(const Trace & trace, const ArgumentContainer & arg,
                                              const std::string & path, int depth_limit)
{
  if (depth_limit < 1) throw InferenceError("depth limit must be at least 1");
  Inferrer inferrer(trace, depth_limit);
  std::vector<Field> fields = inferrer.shape_fields(arg.interactions, path, 1);
  if (fields.empty()) return std::nullopt;
  return InterfaceShape{path, std::move(fields)};
}

std::vector<CandidateSignature> candidate_signatures(const Trace & trace, const FunctionContainer & container,
                                                     int depth_limit)
{
  Inferrer inferrer(trace, depth_limit);
  return inferrer.candidates(container, container.arity(), 1);
}

std::size_t differing_positions(const CandidateSignature & a, const CandidateSignature & b)
{
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(a.params.size(), b.params.size()); ++i) {
    if (canonical_key(a.params[i].type) != canonical_key(b.params[i].type)) ++n;
  }
  return n + (std::max(a.params.size(), b.params.size()) - std::min(a.params.size(), b.params.size()));
}

bool strictly_mergeable(const CandidateSignature & a, const CandidateSignature & b)
{
  return a.params.size() == b.params.size() && equivalent(a.return_type, b.return_type) &&
         differing_positions(a, b) <= 1;
}

bool relaxed_mergeable(const CandidateSignature & a, const CandidateSignature & b)
{
  if (a.params.size() != b.params.size() || !equivalent(a.return_type, b.return_type)) return false;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (!subset_related(a.params[i].type, b.params[i].type)) ++n;
  }
  return n <= 1;
}

CandidateSignature merge_pair(const CandidateSignature & a, const CandidateSignature & b)
{
  CandidateSignature out = a;
  for (std::size_t i = 0; i < out.params.size() && i < b.params.size(); ++i) {
    out.params[i].type = make_union({a.params[i].type, b.params[i].type}, ObjectMerge::Componentwise);
    out.params[i].optional = a.params[i].optional || b.params[i].optional;
  }
  return out;
}

std::vector<CandidateSignature> canonical_set(std::vector<CandidateSignature> candidates)
{
  std::vector<std::pair<std::string, CandidateSignature>> keyed;
  keyed.reserve(candidates.size());
  for (auto & c : candidates) keyed.emplace_back(signature_key(c), std::move(c));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto & x, const auto & y) { return x.first < y.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto & x, const auto & y) { return x.first == y.first; }),
              keyed.end());
  std::vector<CandidateSignature> out;
  out.reserve(keyed.size());
  for (auto & [key, c] : keyed) out.push_back(std::move(c));
  return out;
}

namespace
{

/// Canonical type keys of one merge run, interned as small integers.
class KeyTable
{
public:
  int intern(std::string key, int rank)
  {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] == key) return static_cast<int>(i);
    }
    keys_.push_back(std::move(key));
    ranks_.push_back(rank);
    return static_cast<int>(keys_.size() - 1);
  }
  int intern(const TsType & t)
  {
    // Primitive keys are their kind names; look those up without building a string.
    if (t.is_primitive() || t.is(TsType::Kind::Undefined) || t.is(TsType::Kind::Null) || t.is(TsType::Kind::Void)) {
      const std::string_view name = kind_name(t.kind);
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i] == name) return static_cast<int>(i);
      }
      return intern(std::string(name), canonical_rank(t));
    }
    return intern(canonical_key(t), canonical_rank(t));
  }

  [[nodiscard]] const std::string & key(int id) const { return keys_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] int rank(int id) const { return ranks_[static_cast<std::size_t>(id)]; }

  /// The canonical key of the union of non-union members, as canonical_key would build it.
  std::string union_key(boost::container::small_vector<int, 8> ids) const
  {
    std::sort(ids.begin(), ids.end(), [this](int x, int y) {
      return rank(x) != rank(y) ? rank(x) < rank(y) : key(x) < key(y);
    });
    std::string out = "U(";
    out.reserve(8 * ids.size() + 3);
    for (int id : ids) {
      out += key(id);
      out += '|';
    }
    out += ')';
    return out;
  }

private:
  boost::container::small_vector<std::string, 16> keys_;
  boost::container::small_vector<int, 16> ranks_;
};

// Merge runs are small; these keep their bookkeeping off the heap.
template <typename T, std::size_t N = 8>
using Small = boost::container::small_vector<T, N>;

/// The working set of merge_signatures. Each candidate is a signature index
/// plus interned keys in a flat arena; the inputs are only read.
///
/// Without object literals a merged position is just the union of member
/// keys, so merging works on keys alone and the signatures of the survivors
/// are built once at the end. Object literals fold into one shape, whose key
/// is only known after building it, so those runs merge signatures eagerly.
class MergeRun
{
public:
  explicit MergeRun(const std::vector<CandidateSignature> & candidates)
      : pool_(candidates), arity_(pool_.front().params.size()), next_sig_(pool_.size())
  {
    // Inputs plus at most one entry per merge, and there are fewer merges than inputs.
    arena_.reserve(2 * pool_.size() * (kHeader + kStride * arity_));
    members_.reserve(4 * pool_.size() * arity_);
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      Entry e = index(i);
      e.parts_at = parts_.size();
      e.parts_count = 1;
      parts_.push_back(i);
      set_.push_back(e);
    }
    lazy_ = std::none_of(members_.begin(), members_.end(), [this](int id) { return table_.rank(id) == object_rank(); });
    canonicalize();
  }

  /// Collapses connected components of the strict relation position-wise.
  void collapse_strict()
  {
    Small<std::size_t> parent(set_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      for (std::size_t j = i + 1; j < set_.size(); ++j) {
        if (strictly_mergeable(set_[i], set_[j])) {
          parent[root(j)] = root(i);
          any = true;
        }
      }
    }
    if (!any) return;
    Small<Entry> next;
    Small<std::size_t> slot(set_.size(), set_.size());
    for (std::size_t i = 0; i < set_.size(); ++i) {
      std::size_t & s = slot[root(i)];
      if (s == set_.size()) {
        s = next.size();
        next.push_back(set_[i]);
      } else {
        next[s] = merge(next[s], set_[i]);
      }
    }
    set_ = std::move(next);
    canonicalize();
  }

  /// Merges the leftmost relaxed-mergeable pair until none is left.
  void merge_relaxed()
  {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < set_.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < set_.size() && !changed; ++j) {
          if (!relaxed_mergeable(set_[i], set_[j])) continue;
          set_[i] = merge(set_[i], set_[j]);
          set_.erase(set_.begin() + static_cast<std::ptrdiff_t>(j));
          canonicalize();
          changed = true;
        }
      }
    }
  }

  std::vector<CandidateSignature> result()
  {
    std::vector<CandidateSignature> out;
    out.reserve(set_.size());
    for (const auto & e : set_) out.push_back(lazy_ ? materialize(e) : take(e.sig));
    return out;
  }

private:
  struct Entry
  {
    std::size_t sig;  // creation order; the signature index when merging eagerly
    std::size_t at;   // index into arena_
    std::size_t parts_at = 0;  // the inputs merged into this entry, in parts_
    std::size_t parts_count = 0;
  };

  static int object_rank()
  {
    static const int rank = canonical_rank(TsType::object_literal({}));
    return rank;
  }

  // Arena layout of an entry: return id, type parameter count, then per
  // position its type id, optional/rest marks, member offset and member count.
  static constexpr std::size_t kHeader = 2;
  static constexpr std::size_t kStride = 4;

  [[nodiscard]] int cell(const Entry & e, std::size_t i) const { return arena_[e.at + i]; }
  [[nodiscard]] int type_id(const Entry & e, std::size_t pos) const { return cell(e, kHeader + kStride * pos); }
  [[nodiscard]] int marks(const Entry & e, std::size_t pos) const { return cell(e, kHeader + kStride * pos + 1); }
  [[nodiscard]] auto members(const Entry & e, std::size_t pos) const
  {
    const auto first = members_.begin() + cell(e, kHeader + kStride * pos + 2);
    return std::pair{first, first + cell(e, kHeader + kStride * pos + 3)};
  }

  /// Interns the keys of signature(sig). For a merge of `a` and `b`, positions
  /// where both agree reuse the keys of `a`.
  Entry index(std::size_t sig, const Entry * a = nullptr, const Entry * b = nullptr)
  {
    const CandidateSignature & s = signature(sig);
    const Entry e{sig, arena_.size()};
    arena_.push_back(a ? cell(*a, 0) : table_.intern(s.return_type));
    arena_.push_back(static_cast<int>(s.type_params.size()));
    for (std::size_t pos = 0; pos < s.params.size(); ++pos) {
      const Param & p = s.params[pos];
      if (a && type_id(*a, pos) == type_id(*b, pos)) {
        const std::size_t from = a->at + kHeader + kStride * pos;
        const int id = arena_[from];
        const int first = arena_[from + 2];
        const int count = arena_[from + 3];
        push_position(id, p, first, count);
        continue;
      }
      if (a && index_union(p, *a, *b, pos)) continue;
      const int id = table_.intern(p.type);
      const std::size_t first = members_.size();
      if (p.type.is(TsType::Kind::Union)) {
        for (const auto & m : p.type.args) members_.push_back(table_.intern(m));
        std::sort(members_.begin() + static_cast<std::ptrdiff_t>(first), members_.end());
      } else {
        members_.push_back(id);
      }
      push_position(id, p, static_cast<int>(first), static_cast<int>(members_.size() - first));
    }
    return e;
  }

  /// Keys of a merged position from the member keys of both sides. Object
  /// literals fold into one shape when merged, so those take the slow path.
  bool index_union(const Param & p, const Entry & a, const Entry & b, std::size_t pos)
  {
    const auto [x0, x1] = members(a, pos);
    const auto [y0, y1] = members(b, pos);
    boost::container::small_vector<int, 8> ids;
    std::set_union(x0, x1, y0, y1, std::back_inserter(ids));
    if (std::any_of(ids.begin(), ids.end(), [&](int id) { return table_.rank(id) == object_rank(); })) return false;
    push_union(ids, marks_of(p));
    return true;
  }

  void push_union(const boost::container::small_vector<int, 8> & ids, int marks)
  {
    static const int union_rank = canonical_rank(TsType{TsType::Kind::Union, {}, {}, {}, TsType::kNone});
    const int id = ids.size() == 1 ? ids.front() : table_.intern(table_.union_key(ids), union_rank);
    const std::size_t first = members_.size();
    members_.insert(members_.end(), ids.begin(), ids.end());
    push_position(id, marks, static_cast<int>(first), static_cast<int>(ids.size()));
  }

  static int marks_of(const Param & p) { return (p.optional ? 1 : 0) | (p.rest ? 2 : 0); }

  void push_position(int id, const Param & p, int first, int count) { push_position(id, marks_of(p), first, count); }
  void push_position(int id, int marks, int first, int count)
  {
    arena_.push_back(id);
    arena_.push_back(marks);
    arena_.push_back(first);
    arena_.push_back(count);
  }

  Entry merge(const Entry & a, const Entry & b)
  {
    Entry e = lazy_ ? merge_keys(a, b) : merge_eagerly(a, b);
    e.parts_at = parts_.size();
    e.parts_count = a.parts_count + b.parts_count;
    for (const Entry * side : {&a, &b}) {
      for (std::size_t k = 0; k < side->parts_count; ++k) parts_.push_back(parts_[side->parts_at + k]);
    }
    return e;
  }

  /// Like merge_eagerly but on keys only: `a` keeps its rest marker, optional
  /// markers combine and differing positions take the union of their members.
  Entry merge_keys(const Entry & a, const Entry & b)
  {
    const Entry e{next_sig_++, arena_.size()};
    arena_.push_back(cell(a, 0));
    arena_.push_back(cell(a, 1));
    for (std::size_t pos = 0; pos < arity_; ++pos) {
      const int m = marks(a, pos) | (marks(b, pos) & 1);
      if (type_id(a, pos) == type_id(b, pos)) {
        const std::size_t from = a.at + kHeader + kStride * pos;
        const int first = arena_[from + 2];
        const int count = arena_[from + 3];
        push_position(type_id(a, pos), m, first, count);
        continue;
      }
      const auto [x0, x1] = members(a, pos);
      const auto [y0, y1] = members(b, pos);
      boost::container::small_vector<int, 8> ids;
      std::set_union(x0, x1, y0, y1, std::back_inserter(ids));
      push_union(ids, m);
    }
    return e;
  }

  /// The signature of a key-merged entry: the first input supplies names and
  /// markers, positions where the inputs differ become the union of their types.
  CandidateSignature materialize(const Entry & e)
  {
    const std::size_t head = parts_[e.parts_at];
    CandidateSignature out = pool_[head];
    for (std::size_t pos = 0; pos < arity_; ++pos) {
      out.params[pos].optional = (marks(e, pos) & 1) != 0;
      if (e.parts_count == 1 || type_id(e, pos) == type_id(input_entry(head), pos)) continue;
      std::vector<TsType> all;
      all.reserve(e.parts_count);
      all.push_back(std::move(out.params[pos].type));
      for (std::size_t k = 1; k < e.parts_count; ++k) all.push_back(pool_[parts_[e.parts_at + k]].params[pos].type);
      out.params[pos].type = make_union(std::move(all), ObjectMerge::Componentwise);
    }
    return out;
  }

  /// Inputs are indexed first, so input i sits at a fixed arena offset.
  [[nodiscard]] Entry input_entry(std::size_t i) const { return Entry{i, i * (kHeader + kStride * arity_)}; }

  Entry merge_eagerly(const Entry & a, const Entry & b)
  {
    CandidateSignature out = take(a.sig);
    const CandidateSignature & other = signature(b.sig);
    for (std::size_t i = 0; i < arity_; ++i) {
      if (type_id(a, i) != type_id(b, i)) {
        std::vector<TsType> both;
        both.reserve(2);
        both.push_back(std::move(out.params[i].type));
        both.push_back(other.params[i].type);
        out.params[i].type = make_union(std::move(both), ObjectMerge::Componentwise);
      }
      out.params[i].optional = out.params[i].optional || other.params[i].optional;
    }
    // There are fewer merges than candidates, so `merged_` never reallocates.
    if (merged_.empty()) merged_.reserve(pool_.size());
    merged_.push_back(std::move(out));
    return index(pool_.size() + merged_.size() - 1, &a, &b);
  }

  [[nodiscard]] bool same(const Entry & a, const Entry & b) const
  {
    const std::size_t n = kHeader + kStride * arity_;
    for (std::size_t i = 0; i < n; ++i) {
      // Member offsets differ between identical entries; their ids do not.
      if (i >= kHeader && (i - kHeader) % kStride >= 2) continue;
      if (cell(a, i) != cell(b, i)) return false;
    }
    return true;
  }

  /// A total order on candidates that depends only on their keys.
  [[nodiscard]] bool less(const Entry & a, const Entry & b) const
  {
    if (cell(a, 1) != cell(b, 1)) return cell(a, 1) < cell(b, 1);
    for (std::size_t i = 0; i < arity_; ++i) {
      if (type_id(a, i) != type_id(b, i)) return table_.key(type_id(a, i)) < table_.key(type_id(b, i));
      if (marks(a, i) != marks(b, i)) return marks(a, i) < marks(b, i);
    }
    return cell(a, 0) != cell(b, 0) && table_.key(cell(a, 0)) < table_.key(cell(b, 0));
  }

  void canonicalize()
  {
    // Ties keep input order, so the first of several equal candidates survives.
    std::sort(set_.begin(), set_.end(), [this](const Entry & x, const Entry & y) {
      if (less(x, y)) return true;
      return !less(y, x) && x.sig < y.sig;
    });
    set_.erase(std::unique(set_.begin(), set_.end(), [this](const Entry & x, const Entry & y) { return same(x, y); }),
               set_.end());
  }

  [[nodiscard]] bool strictly_mergeable(const Entry & a, const Entry & b) const
  {
    if (cell(a, 0) != cell(b, 0)) return false;
    std::size_t n = 0;
    for (std::size_t i = 0; i < arity_; ++i) n += type_id(a, i) != type_id(b, i) ? 1 : 0;
    return n <= 1;
  }

  [[nodiscard]] bool relaxed_mergeable(const Entry & a, const Entry & b) const
  {
    if (cell(a, 0) != cell(b, 0)) return false;
    std::size_t n = 0;
    for (std::size_t i = 0; i < arity_ && n <= 1; ++i) {
      if (type_id(a, i) == type_id(b, i)) continue;
      const auto [x0, x1] = members(a, i);
      const auto [y0, y1] = members(b, i);
      n += std::includes(x0, x1, y0, y1) || std::includes(y0, y1, x0, x1) ? 0 : 1;
    }
    return n <= 1;
  }

  [[nodiscard]] const CandidateSignature & signature(std::size_t i) const
  {
    return i < pool_.size() ? pool_[i] : merged_[i - pool_.size()];
  }

  /// A signature for a candidate that is merged away or returned. Inputs are
  /// copied; merged signatures are never looked at again and can be moved.
  CandidateSignature take(std::size_t i)
  {
    if (i < pool_.size()) return pool_[i];
    return std::move(merged_[i - pool_.size()]);
  }

  const std::vector<CandidateSignature> & pool_;  // the input, indices below pool_.size()
  std::vector<CandidateSignature> merged_;
  std::size_t arity_;
  std::size_t next_sig_;
  bool lazy_ = false;
  Small<std::size_t, 16> parts_;
  KeyTable table_;
  std::vector<int> arena_;
  std::vector<int> members_;
  Small<Entry> set_;
};

}  // namespace

std::vector<CandidateSignature> merge_signatures(const std::vector<CandidateSignature> & candidates)
{
  if (candidates.empty()) return {};
  const std::size_t arity = candidates.front().params.size();
  for (const auto & c : candidates) {
    if (c.params.size() != arity) throw InferenceError("candidate signatures differ in arity");
  }
  MergeRun run(candidates);
  run.collapse_strict();
  run.merge_relaxed();
  return run.result();
}

Signature finalize_parameters(const Signature & sig)
{
  Signature out = sig;
  auto only_undefined = [](const TsType & t) { return t.is(TsType::Kind::Undefined); };
  while (!out.params.empty() && only_undefined(out.params.back().type)) out.params.pop_back();

  bool later_optional = true;
  for (std::size_t i = out.params.size(); i-- > 0;) {
    Param & p = out.params[i];
    const bool has_undefined = contains_kind(p.type, TsType::Kind::Undefined);
    if (has_undefined && later_optional && !only_undefined(p.type)) {
      p.optional = true;
      p.type = remove_members(p.type, TsType::Kind::Undefined);
    }
    later_optional = later_optional && p.optional;
  }
  return out;
}

DeclarationModule infer_module(const Trace & trace, const std::string & module_name, const InferenceConfig & config)
{
  const std::string module = config.module_name.empty() ? module_name : config.module_name;
  if (config.depth_limit < 1) throw InferenceError("depth limit must be at least 1");
  if (trace.empty()) throw InsufficientTrace("the trace is empty");

  const TemplateKind kind = select_template(trace, module);
  Inferrer inferrer(trace, config.depth_limit);

  const FunctionContainer * main = nullptr;
  std::vector<const FunctionContainer *> main_group;
  std::vector<const FunctionContainer *> members;
  std::vector<const FunctionContainer *> instance_members;
  for (const auto & [id, fn] : trace.functions) {
    if (fn.required_module != module || fn.invocations.empty()) continue;
    if (kind != TemplateKind::Module && fn.is_exported && !fn.is_instance_member &&
        (!main || (fn.function_name == main->function_name && fn.is_constructor == main->is_constructor))) {
      if (!main) main = &fn;
      main_group.push_back(&fn);
    } else if (fn.is_instance_member) {
      instance_members.push_back(&fn);
    } else if (!fn.function_name.empty()) {
      members.push_back(&fn);
    }
  }

  DeclarationModule out;
  out.module_name = module;
  out.template_kind = kind;

  auto functions_of = [&](const std::vector<const FunctionContainer *> & containers) {
    std::vector<FunctionDecl> fns;
    for (const auto & [name, group] : group_by_name(containers)) {
      FunctionDecl f;
      f.name = name;
      f.overloads = inferrer.signatures(group, 1);
      fns.push_back(std::move(f));
    }
    return fns;
  };

  if (kind == TemplateKind::Module) {
    Hoister hoister("");
    out.scope.functions = functions_of(members);
    if (out.scope.functions.empty()) throw InsufficientTrace("no function of module '" + module + "' was invoked");
    for (auto & f : out.scope.functions) hoister.hoist(f);
    out.scope.interfaces = hoister.take();
    return out;
  }

  std::string export_name = camelize(module);
  if (kind == TemplateKind::ModuleClass && is_identifier(main->function_name)) export_name = main->function_name;
  out.export_assignment = export_name;
  Hoister hoister(export_name + ".");

  NamespaceDecl ns;
  ns.name = export_name;
  if (kind == TemplateKind::ModuleFunction) {
    FunctionDecl f;
    f.name = export_name;
    f.overloads = inferrer.signatures(main_group, 1);
    hoister.hoist(f);
    out.scope.functions.push_back(std::move(f));
  } else {
    ClassDecl c;
    c.name = export_name;
    for (auto s : inferrer.signatures(main_group, 1)) {
      s.return_type = TsType::unspecified();
      c.constructors.push_back(std::move(s));
    }
    c.constructors = canonical_set(std::move(c.constructors));
    for (auto & s : c.constructors) hoister.hoist(s);
    c.methods = functions_of(instance_members);
    for (auto & m : c.methods) hoister.hoist(m);
    out.scope.classes.push_back(std::move(c));
  }
  ns.body.functions = functions_of(members);
  for (auto & f : ns.body.functions) hoister.hoist(f);
  ns.body.interfaces = hoister.take();
  if (kind == TemplateKind::ModuleClass || !ns.body.empty()) out.scope.namespaces.push_back(std::move(ns));
  return out;
}

}  // namespace dtsgen
