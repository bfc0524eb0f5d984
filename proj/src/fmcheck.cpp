#include "linkfm/fmcheck.hpp"

#include <array>

namespace linkfm {

std::string to_string(FmRoute route) {
  switch (route) {
    case FmRoute::kSmallSet: return "small-set";
    case FmRoute::kCondA: return "cond-a";
    case FmRoute::kCondB: return "cond-b";
    case FmRoute::kCondC: return "cond-c";
    case FmRoute::kFailureEqualities: return "failure-equalities";
    case FmRoute::kCongruence: return "congruence";
  }
  return "unknown";
}

FmRoute route_from_string(const std::string& s) {
  for (auto r : {FmRoute::kSmallSet, FmRoute::kCondA, FmRoute::kCondB, FmRoute::kCondC,
                 FmRoute::kFailureEqualities, FmRoute::kCongruence}) {
    if (to_string(r) == s) return r;
  }
  throw InvalidInput("unknown route '" + s + "'");
}

nlohmann::ordered_json to_json(const FmVerdict& v) {
  nlohmann::ordered_json j;
  j["holds"] = v.holds;
  j["route"] = to_string(v.route);
  j["detail"] = v.detail;
  if (v.witness) {
    auto mats = nlohmann::ordered_json::array();
    for (const auto& m : *v.witness) {
      auto rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < m.n(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < m.n(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
    j["witness"] = mats;
  }
  return j;
}

FmVerdict fm_small(const RelationSystem& sys) {
  if (sys.d() > 2) {
    throw InvalidInput("fm_small applies to at most two generators, got " +
                       std::to_string(sys.d()));
  }
  return FmVerdict{true, FmRoute::kSmallSet, {}, std::nullopt};
}

namespace {

void require_three(const RelationSystem& sys) {
  if (sys.d() != 3) {
    throw InvalidInput("the three-prime criteria need exactly 3 generators, got " +
                       std::to_string(sys.d()));
  }
}

}  // namespace

FmVerdict fm3_conditions(const RelationSystem& sys, std::uint32_t n) {
  require_three(sys);
  if (n < 2 || n >= sys.p) {
    throw InvalidInput("representation dimension must satisfy 2 <= n < p, got n=" +
                       std::to_string(n) + " with p=" + std::to_string(sys.p));
  }
  const PrimeField f{sys.p};
  const Matrix m = m_matrix(sys);
  auto at = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(m(i, j)); };

  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j && at(i, j) == 0) return FmVerdict{true, FmRoute::kCondA, {i, j}, std::nullopt};
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const std::size_t k = 3 - i - j;
      if (at(i, k) == at(j, k)) return FmVerdict{true, FmRoute::kCondB, {i, j, k}, std::nullopt};
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const std::size_t k = 3 - i - j;
      const auto left = f.sub(at(i, k), at(j, k));
      const auto right = f.sub(f.mul(at(k, i), at(i, j)), f.mul(at(k, j), at(j, i)));
      if (f.mul(left, right) != 0) {
        return FmVerdict{true, FmRoute::kCondC, {i, j, k}, std::nullopt};
      }
    }
  }
  return FmVerdict{false, FmRoute::kFailureEqualities, {}, std::nullopt};
}

bool fm3_failure_criterion(const RelationSystem& sys) {
  require_three(sys);
  const PrimeField f{sys.p};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j && sys.ell(i, j) == 0) return false;
    }
  }
  // ratio(i, j) = ell_ij / c_i, one-based in the comments below.
  auto ratio = [&](std::size_t i, std::size_t j) {
    return f.div(static_cast<std::uint32_t>(sys.ell(i, j)), sys.c[i]);
  };
  return ratio(0, 2) == f.neg(ratio(1, 2))     // ell_13/c_1 = -ell_23/c_2
         && ratio(1, 0) == f.neg(ratio(2, 0))  // ell_21/c_2 = -ell_31/c_3
         && ratio(0, 1) == f.neg(ratio(2, 1)); // ell_12/c_1 = -ell_32/c_3
}

bool fm3_congruence_criterion(std::uint32_t p, const std::vector<std::uint64_t>& primes) {
  if (primes.size() != 3) {
    throw InvalidInput("the congruence criterion needs exactly 3 primes, got " +
                       std::to_string(primes.size()));
  }
  require_odd_prime(p);
  if (primes[0] == primes[1] || primes[0] == primes[2] || primes[1] == primes[2]) {
    throw InvalidInput("duplicate prime in triple");
  }
  std::array<PrimeRecord, 3> rec;
  for (std::size_t i = 0; i < 3; ++i) rec[i] = PrimeRecord::make(primes[i], p);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j && pth_power_residue(primes[i], rec[j])) return false;
    }
  }
  // (q_a^{c_b} q_b^{c_a}) is a p-th power residue modulo q_k.
  auto residue = [&](std::size_t a, std::size_t b, std::size_t k) {
    const auto q = rec[k].q;
    const auto base = mul_mod(pow_mod(primes[a], rec[b].c, q), pow_mod(primes[b], rec[a].c, q), q);
    return pth_power_residue(base, rec[k]);
  };
  return residue(0, 1, 2) && residue(1, 2, 0) && residue(0, 2, 1);
}

}  // namespace linkfm
