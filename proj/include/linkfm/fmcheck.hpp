#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkfm/linkdata.hpp"

namespace linkfm {

/// Which criterion decided a verdict.
enum class FmRoute { kSmallSet, kCondA, kCondB, kCondC, kFailureEqualities, kCongruence };

std::string to_string(FmRoute route);
FmRoute route_from_string(const std::string& s);

struct FmVerdict {
  bool holds = false;
  FmRoute route = FmRoute::kSmallSet;
  /// Zero-based indices: (i, j) for cond-a, (i, j, k) for cond-b and cond-c,
  /// and empty for the failure routes (all three equalities are involved).
  std::vector<std::size_t> detail;
  std::optional<std::vector<Matrix>> witness;

  bool operator==(const FmVerdict&) const = default;
};

nlohmann::ordered_json to_json(const FmVerdict& v);

/// |S| <= 2: the linking algebra is zero, so FM(n) holds for every n.
FmVerdict fm_small(const RelationSystem& sys);

/// The three-generator decision by conditions (a), (b), (c) on m_ij. The
/// verdict is independent of n; n is checked against 2 <= n < p.
FmVerdict fm3_conditions(const RelationSystem& sys, std::uint32_t n);

/// True iff every off-diagonal ell is nonzero and
///   ell_13/c_1 = -ell_23/c_2, ell_21/c_2 = -ell_31/c_3, ell_12/c_1 = -ell_32/c_3.
bool fm3_failure_criterion(const RelationSystem& sys);

/// The same failure test phrased on the primes themselves: all six linking
/// numbers nonzero and q_1^{c_2} q_2^{c_1}, q_2^{c_3} q_3^{c_2}, q_1^{c_3} q_3^{c_1}
/// are p-th power residues modulo q_3, q_1, q_2 respectively.
bool fm3_congruence_criterion(std::uint32_t p, const std::vector<std::uint64_t>& primes);

inline FmVerdict fm_small(const LinkingData& ld) { return fm_small(ld.relations()); }
inline FmVerdict fm3_conditions(const LinkingData& ld, std::uint32_t n) {
  return fm3_conditions(ld.relations(), n);
}
inline bool fm3_failure_criterion(const LinkingData& ld) {
  return fm3_failure_criterion(ld.relations());
}

}  // namespace linkfm
