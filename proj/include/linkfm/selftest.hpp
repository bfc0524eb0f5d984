#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace linkfm {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  std::uint32_t p = 3;
  std::uint64_t seed = 1729;
  std::size_t samples = 500;
  /// Triples of eligible primes up to this bound are cross-checked.
  std::uint64_t triple_bound = 300;
  std::uint64_t budget = 1'000'000'000;
  /// Per-triple oracle budget; triples beyond it are decided without the oracle.
  std::uint64_t oracle_budget = 2'000'000;
  unsigned jobs = 1;
};

/// Runs the executable property suites for one prime p: the nilpotency lemma
/// (exhaustive), the matrix congruence lemmas, agreement of every FM route
/// with each other and with the oracle, and primitive-root invariance.
std::vector<SuiteResult> run_selftest(const SelftestOptions& opts);

}  // namespace linkfm
