#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "linkfm/linkdata.hpp"
#include "linkfm/matrix.hpp"

namespace linkfm {

/// A nonzero tuple of n x n matrices over F_p satisfying every relator of
/// `system`; certifies that Property FM(n) fails.
struct HomWitness {
  RelationSystem system;
  std::size_t n = 0;
  std::vector<SquareMatrixFp> mats;

  bool operator==(const HomWitness&) const = default;
};

nlohmann::ordered_json to_json(const HomWitness& w);
/// Reads {"n", "p", "mats"}; the caller supplies the system it refers to.
HomWitness witness_from_json(const nlohmann::json& j, const RelationSystem& sys);

/// True iff c_i A_i + sum_{j != i} ell_ij [A_i, A_j] = 0 over F_p for every i.
bool check_hom(const RelationSystem& sys, std::span<const SquareMatrixFp> mats);

enum class SearchStatus { kFound, kNone, kInfeasible };

struct SearchOptions {
  std::uint64_t budget = 1'000'000'000;
  unsigned jobs = 1;
  /// Restrict every A_i to trace zero. Taking traces of relator i leaves
  /// c_i tr(A_i) = 0, so nothing is lost.
  bool trace_zero = true;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kNone;
  std::optional<HomWitness> witness;
  std::uint64_t candidates = 0;  ///< size of the enumerated space (0 when infeasible)
};

/// Exhaustive search for the lexicographically first nonzero homomorphism
/// into gl_n(F_p). Matrices are ordered by their free entries read row-major
/// as base-p digits; tuples by (A_1, ..., A_d). Identical for every job count.
SearchResult find_nontrivial_hom(const RelationSystem& sys, std::size_t n,
                                 const SearchOptions& opts = {});

/// The 2m-generator cycle: relator i is c_i x_i + [x_i, x_{i+1}], indices mod 2m.
RelationSystem cycle_system(std::uint32_t p, std::size_t m, std::vector<std::uint32_t> c);

bool is_nilpotent(const SquareMatrixFp& a, std::uint32_t p);

struct ExhaustiveResult {
  bool feasible = true;
  bool holds = true;
  std::uint64_t pairs = 0;      ///< pairs examined
  std::uint64_t solutions = 0;  ///< pairs with A = [A, B]
};

/// For every pair (A, B) in gl_n(F_p) with A = AB - BA, checks A^n = 0.
ExhaustiveResult lemma_bb_exhaustive(std::size_t n, std::uint32_t p,
                                     std::uint64_t budget = 1'000'000'000);

/// A matrix over Z / p^level.
struct TruncatedMatrix {
  std::uint32_t p = 0;
  unsigned level = 0;
  Matrix m;

  std::uint64_t modulus() const;
  TruncatedMatrix reduced(unsigned new_level) const;
};

/// Inverse over Z / mod via the adjugate; throws when det is not a unit.
Matrix inverse(const Matrix& a, std::uint64_t mod);

/// Random checks, for X = 1 + p^i A and Y = 1 + p^j B, of
///   [X, Y] = 1 + p^{i+j} [A, B]  mod p^{i+j+1},
///   X^p    = 1 + p^{i+1} A       mod p^{i+2}.
bool commutator_congruence_check(std::uint32_t p, unsigned i, unsigned j, std::size_t samples,
                                 std::uint64_t seed, std::size_t n = 2);

/// 2 x 2 congruences for triangular images, sampled.
bool commutator_with_unipotent_check(std::uint32_t p, std::size_t samples, std::uint64_t seed);
bool unipotent_power_check(std::uint32_t p, std::size_t samples, std::uint64_t seed);
bool det_one_trace_check(std::uint32_t p, std::size_t samples, std::uint64_t seed,
                         std::size_t n = 2);
/// All three of the above.
bool triangular_lemma_checks(std::uint32_t p, std::size_t samples, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 1729;

}  // namespace linkfm
