#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkfm/linkdata.hpp"

namespace linkfm {

enum class LinkConstraint { kZero, kNonzero, kAny };

std::string to_string(LinkConstraint c);
LinkConstraint constraint_from_string(const std::string& s);
bool satisfies(LinkConstraint c, std::uint64_t value);

/// Constraints on a new prime q against one existing prime q_i.
struct PatternSlot {
  std::uint64_t q = 0;
  LinkConstraint out = LinkConstraint::kAny;  ///< on ell(q_new, q_i)
  LinkConstraint in = LinkConstraint::kAny;   ///< on ell(q_i, q_new)
};

using LinkPattern = std::vector<PatternSlot>;

/// Reads [{"q": 7, "out": "nonzero", "in": "zero"}, ...].
LinkPattern pattern_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const LinkPattern& pattern);

/// Relabels by perm (zero-based: position a holds prime perm[a]) and tests,
/// with one-based positions 1..d:
///   (a) ell_{i,i+1} != 0 for i < d and ell_{d,1} != 0;
///   (b) ell_{ij} = 0 whenever i and j are both odd;
///   (c) ell_12 ell_23 ... ell_{d-1,d} ell_{d,1} != ell_{1,d} ell_{d,d-1} ... ell_32 ell_21.
/// Always false for odd d, since positions d and 1 are then both odd.
bool is_circular_ordering(const RelationSystem& sys, std::span<const std::size_t> perm);
inline bool is_circular_ordering(const LinkingData& ld, std::span<const std::size_t> perm) {
  return is_circular_ordering(ld.relations(), perm);
}

inline constexpr std::size_t kMaxCircularSearch = 10;

struct OrderingResult {
  bool feasible = true;
  std::optional<std::vector<std::size_t>> perm;
};

/// The lexicographically first circular ordering; infeasible for d > 10.
OrderingResult find_circular_ordering(const RelationSystem& sys);
inline OrderingResult find_circular_ordering(const LinkingData& ld) {
  return find_circular_ordering(ld.relations());
}

struct ExtensionResult {
  std::optional<std::uint64_t> prime;
  std::optional<LinkingData> extended;  ///< S with the new prime appended
  std::uint64_t bound = 0;              ///< the search bound that was used
};

/// Smallest eligible q <= bound, not in S, meeting every slot of pattern.
ExtensionResult extend_with_pattern(const LinkingData& ld, const LinkPattern& pattern,
                                    std::uint64_t bound);

struct CoverResult {
  std::optional<LinkingData> cover;  ///< 2d primes; the originals at even (one-based) positions
  std::uint64_t bound = 0;
  std::size_t placed = 0;  ///< most new primes simultaneously placed during the search
};

/// Interleaves one new prime before each original prime so that the result
/// is circular under the identity ordering:
///   ell'_{i,i+1} != 0 for every i < 2d, ell'_{2d,1} != 0,
///   every other ell'_{ij} with i or j odd is zero.
CoverResult mild_fm_cover(const LinkingData& ld, std::uint64_t bound);

/// The pattern constraints of mild_fm_cover, recomputed from the primes.
bool verify_cover_pattern(const LinkingData& cover);

}  // namespace linkfm
