#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "linkfm/matrix.hpp"
#include "linkfm/modarith.hpp"

namespace linkfm {

/// Abstract relator data (p, c, ell) of a linking algebra. The i-th relator is
///   c_i x_i + sum_{j != i} ell_ij [x_i, x_j].
/// Need not come from a set of primes.
struct RelationSystem {
  std::uint32_t p = 0;
  std::vector<std::uint32_t> c;
  Matrix ell;  ///< d x d over F_p, zero diagonal

  std::size_t d() const { return c.size(); }

  /// Validates p, the c vector, and the shape of ell; clears the diagonal.
  static RelationSystem make(std::uint32_t p, std::vector<std::uint32_t> c, Matrix ell);

  bool operator==(const RelationSystem&) const = default;
};

/// The linking invariant of an ordered set of eligible primes.
struct LinkingData {
  std::uint32_t p = 0;
  std::vector<PrimeRecord> primes;
  std::vector<std::uint32_t> c;
  Matrix ell;  ///< ell(i, j) = linking_number(primes[i].q, primes[j]); diagonal 0

  std::size_t d() const { return primes.size(); }
  std::vector<std::uint64_t> qs() const;
  RelationSystem relations() const { return RelationSystem{p, c, ell}; }

  bool operator==(const LinkingData&) const = default;
};

/// Builds the linking data for qlist with the smallest primitive roots, or
/// with the given roots when roots is non-empty (one per prime).
LinkingData build_linking_data(std::uint32_t p, std::span<const std::uint64_t> qlist,
                               std::span<const std::uint64_t> roots = {});

/// m_ij = -ell_ij / c_i, zero diagonal.
Matrix m_matrix(const RelationSystem& sys);
inline Matrix m_matrix(const LinkingData& ld) { return m_matrix(ld.relations()); }

/// ell'_ij = s_j ell_ij. Models a change of primitive roots.
RelationSystem rescale_columns(const RelationSystem& sys, std::span<const std::uint32_t> s);
LinkingData rescale_columns(const LinkingData& ld, std::span<const std::uint32_t> s);

nlohmann::ordered_json to_json(const LinkingData& ld);
/// Parses the interchange format. With verify set, c and ell are recomputed
/// from the primes and roots and must match the stored values; otherwise the
/// stored ell is taken as-is after shape and range checks.
LinkingData linking_data_from_json(const nlohmann::json& j, bool verify = true);

nlohmann::ordered_json to_json(const RelationSystem& sys);

}  // namespace linkfm
