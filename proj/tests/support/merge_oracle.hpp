// Exhaustive order-independence check for merge_signatures.
//
// Parameter types are drawn from {string, number, boolean, undefined} and
// modelled independently as bitmasks: union is OR, "same member set or one
// contains the other" is mask inclusion. The oracle explores every sequence
// of pairwise merges and collects the terminal candidate sets.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtsgen/inference.hpp"

namespace dtsgen::testing_support
{

constexpr int kUniverse = 4;

using Mask = std::uint8_t;
using MaskSig = std::vector<Mask>;
using MaskSet = std::vector<MaskSig>;

constexpr Mask kBadMask = 0xFF;

inline TsType type_of(int bit)
{
  switch (bit) {
    case 0: return TsType::string();
    case 1: return TsType::number();
    case 2: return TsType::boolean();
    default: return TsType::undefined();
  }
}

inline Mask mask_of(const TsType & t)
{
  auto bit = [](const TsType & member) -> Mask {
    switch (member.kind) {
      case TsType::Kind::String: return 1;
      case TsType::Kind::Number: return 2;
      case TsType::Kind::Boolean: return 4;
      case TsType::Kind::Undefined: return 8;
      default: return kBadMask;
    }
  };
  if (!t.is(TsType::Kind::Union)) return bit(t);
  Mask m = 0;
  for (const auto & member : t.args) {
    if (bit(member) == kBadMask) return kBadMask;
    m |= bit(member);
  }
  return m;
}

inline Signature to_signature(const MaskSig & s)
{
  Signature out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<TsType> members;
    for (int bit = 0; bit < kUniverse; ++bit) {
      if (s[i] & (1 << bit)) members.push_back(type_of(bit));
    }
    out.params.push_back(Param{"p" + std::to_string(i), make_union(std::move(members))});
  }
  out.return_type = TsType::void_type();
  return out;
}

/// Sorted masks of a signature list; duplicates kept.
inline MaskSet to_masks(const std::vector<Signature> & sigs)
{
  MaskSet out;
  out.reserve(sigs.size());
  for (const auto & s : sigs) {
    MaskSig m;
    m.reserve(s.params.size());
    for (const auto & p : s.params) m.push_back(mask_of(p.type));
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool nested(Mask a, Mask b) { return (a & b) == a || (a & b) == b; }

inline bool oracle_mergeable(const MaskSig & a, const MaskSig & b)
{
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += nested(a[i], b[i]) ? 0 : 1;
  return differing <= 1;
}

inline MaskSet normalized(MaskSet s)
{
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Every fixpoint reachable by some sequence of pairwise merges.
inline std::set<MaskSet> oracle_terminals(const MaskSet & start)
{
  std::set<MaskSet> seen;
  std::set<MaskSet> terminals;
  std::function<void(const MaskSet &)> explore = [&](const MaskSet & s) {
    if (!seen.insert(s).second) return;
    bool terminal = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (!oracle_mergeable(s[i], s[j])) continue;
        terminal = false;
        MaskSet next;
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (k != i && k != j) next.push_back(s[k]);
        }
        MaskSig merged(s[i].size());
        for (std::size_t p = 0; p < merged.size(); ++p) merged[p] = s[i][p] | s[j][p];
        next.push_back(merged);
        explore(normalized(std::move(next)));
      }
    }
    if (terminal) terminals.insert(s);
  };
  explore(normalized(start));
  return terminals;
}

inline bool is_fixpoint(const MaskSet & s)
{
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (oracle_mergeable(s[i], s[j])) return false;
    }
  }
  return true;
}

/// Position in the universe of a singleton signature: its parameter bits read
/// as base-4 digits, lowest position first.
inline std::size_t universe_index(const Signature & s)
{
  std::size_t index = 0;
  for (std::size_t i = s.params.size(); i-- > 0;) {
    const Mask m = mask_of(s.params[i].type);
    index = index * kUniverse + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(m)));
  }
  return index;
}

inline bool universe_less(const Signature & a, const Signature & b) { return universe_index(a) < universe_index(b); }

struct ConfluenceStats
{
  std::size_t multisets = 0;
  std::size_t orders = 0;
  std::size_t ambiguous = 0;  // the oracle reaches more than one fixpoint
  std::string failure;        // first violation, empty when none
};

/// Every multiset of size 1..max_size over the singleton signatures of
/// `arity`, in every distinct order.
inline ConfluenceStats check_confluence(std::size_t arity, std::size_t max_size)
{
  std::vector<MaskSig> universe;
  std::size_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) count *= kUniverse;
  for (std::size_t code = 0; code < count; ++code) {
    MaskSig s;
    for (std::size_t i = 0, c = code; i < arity; ++i, c /= kUniverse) s.push_back(Mask(1u << (c % kUniverse)));
    universe.push_back(s);
  }
  std::vector<Signature> signatures;
  for (const auto & m : universe) signatures.push_back(to_signature(m));

  ConfluenceStats stats;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (!stats.failure.empty()) return;
    if (!pick.empty()) {
      ++stats.multisets;
      MaskSet input;
      for (auto i : pick) input.push_back(universe[i]);

      // `pick` is non-decreasing, so next_permutation visits each distinct
      // order once. The signatures are permuted in place, ordered by universe index.
      std::vector<Signature> permuted;
      permuted.reserve(pick.size());
      for (auto i : pick) permuted.push_back(signatures[i]);
      MaskSet expected;
      bool first = true;
      do {
        ++stats.orders;
        const MaskSet got = to_masks(merge_signatures(permuted));
        if (first) {
          expected = got;
          first = false;
        } else if (got != expected) {
          stats.failure = "order-dependent result for a multiset of " + std::to_string(pick.size()) + " at arity " +
                          std::to_string(arity);
          return;
        }
      } while (std::next_permutation(permuted.begin(), permuted.end(), universe_less));

      if (!is_fixpoint(expected)) {
        stats.failure = "result is not a fixpoint at arity " + std::to_string(arity);
        return;
      }
      const auto terminals = oracle_terminals(input);
      if (!terminals.contains(expected)) {
        stats.failure = "result is not reachable by pairwise merges at arity " + std::to_string(arity);
        return;
      }
      if (terminals.size() > 1) ++stats.ambiguous;
    }
    if (pick.size() == max_size) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
      pick.push_back(i);
      choose(i);
      pick.pop_back();
    }
  };
  choose(0);
  return stats;
}

}  // namespace dtsgen::testing_support
