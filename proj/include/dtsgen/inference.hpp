// inference.hpp - trace to declaration AST: templates, interfaces, candidate signatures, merging
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtsgen/declaration.hpp"
#include "dtsgen/trace.hpp"

namespace dtsgen
{

class InferenceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The trace never touched the module in a way that yields a declaration.
class InsufficientTrace : public InferenceError
{
public:
  using InferenceError::InferenceError;
};

struct InferenceConfig
{
  int depth_limit = 5;
  std::string module_name;  // overrides the module name passed to infer_module when set
};

using CandidateSignature = Signature;

struct InterfaceShape
{
  std::string name;
  std::vector<Field> properties;  // methods are properties of callback type
};

/// `glob-to-regexp` -> `GlobToRegexp`.
std::string camelize(std::string_view module_name);

TemplateKind select_template(const Trace & trace, const std::string & module_name);

/// Aggregates every interaction recorded on `arg` into one structural shape named
/// `path`. Returns nullopt when nothing was observed (the caller emits `object`).
std::optional<InterfaceShape> build_interface(const Trace & trace, const ArgumentContainer & arg,
                                              const std::string & path, int depth_limit);

/// One signature per invocation. Parameters still carry `undefined` members;
/// object shapes appear as named ObjectLiteral types (the name is the
/// interface name proposed for hoisting).
std::vector<CandidateSignature> candidate_signatures(const Trace & trace,
                                                     const FunctionContainer & container,
                                                     int depth_limit);

/// Parameter positions where a and b differ, by canonical type key.
std::size_t differing_positions(const CandidateSignature & a, const CandidateSignature & b);

/// Equal arity, equal return types, at most one differing position.
bool strictly_mergeable(const CandidateSignature & a, const CandidateSignature & b);

/// Like strictly_mergeable, but positions whose member sets are in a subset
/// relation do not count as differing.
bool relaxed_mergeable(const CandidateSignature & a, const CandidateSignature & b);

/// Position-wise union; object shapes merge componentwise.
CandidateSignature merge_pair(const CandidateSignature & a, const CandidateSignature & b);

/// Deduplicated, canonically ordered candidate set.
std::vector<CandidateSignature> canonical_set(std::vector<CandidateSignature> candidates);

/// Merges candidates to a set of non-mergeable signatures. Throws
/// InferenceError on an arity mismatch.
std::vector<CandidateSignature> merge_signatures(const std::vector<CandidateSignature> & candidates);

/// Turns `undefined` members into optional parameters where TypeScript allows it
/// and drops trailing parameters that were never supplied.
Signature finalize_parameters(const Signature & sig);

DeclarationModule infer_module(const Trace & trace, const std::string & module_name,
                               const InferenceConfig & config = {});

}  // namespace dtsgen
