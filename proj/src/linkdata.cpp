#include "linkfm/linkdata.hpp"

#include <set>

namespace linkfm {

RelationSystem RelationSystem::make(std::uint32_t p, std::vector<std::uint32_t> c, Matrix ell) {
  require_odd_prime(p);
  if (ell.n() != c.size()) {
    throw InvalidInput("relation system: ell is " + std::to_string(ell.n()) + "x" +
                       std::to_string(ell.n()) + " but c has " + std::to_string(c.size()) +
                       " entries");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] %= p;
    if (c[i] == 0) throw InvalidInput("relation system: c[" + std::to_string(i) + "] is zero");
  }
  ell = reduce(ell, p);
  for (std::size_t i = 0; i < c.size(); ++i) ell(i, i) = 0;
  return RelationSystem{p, std::move(c), std::move(ell)};
}

std::vector<std::uint64_t> LinkingData::qs() const {
  std::vector<std::uint64_t> out;
  out.reserve(primes.size());
  for (const auto& r : primes) out.push_back(r.q);
  return out;
}

LinkingData build_linking_data(std::uint32_t p, std::span<const std::uint64_t> qlist,
                               std::span<const std::uint64_t> roots) {
  require_odd_prime(p);
  if (!roots.empty() && roots.size() != qlist.size()) {
    throw InvalidInput("expected " + std::to_string(qlist.size()) + " primitive roots, got " +
                       std::to_string(roots.size()));
  }
  LinkingData ld;
  ld.p = p;
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < qlist.size(); ++i) {
    const auto q = qlist[i];
    if (!seen.insert(q).second) throw InvalidInput("duplicate prime " + std::to_string(q));
    ld.primes.push_back(PrimeRecord::make(q, p, roots.empty() ? 0 : roots[i]));
    ld.c.push_back(ld.primes.back().c);
  }
  const auto d = ld.primes.size();
  ld.ell = Matrix(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j) ld.ell(i, j) = linking_number(ld.primes[i].q, ld.primes[j]);
    }
  }
  return ld;
}

Matrix m_matrix(const RelationSystem& sys) {
  const PrimeField f{sys.p};
  const auto d = sys.d();
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto inv_c = f.inv(sys.c[i]);
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      m(i, j) = f.neg(f.mul(static_cast<std::uint32_t>(sys.ell(i, j)), inv_c));
    }
  }
  return m;
}

namespace {

Matrix rescaled(const Matrix& ell, std::uint32_t p, std::span<const std::uint32_t> s) {
  if (s.size() != ell.n()) {
    throw InvalidInput("rescale_columns: expected " + std::to_string(ell.n()) +
                       " scalars, got " + std::to_string(s.size()));
  }
  Matrix out = ell;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] % p == 0) throw InvalidInput("rescale_columns: scalar " + std::to_string(j) + " is zero");
    for (std::size_t i = 0; i < ell.n(); ++i) out(i, j) = mul_mod(ell(i, j), s[j] % p, p);
  }
  return out;
}

}  // namespace

RelationSystem rescale_columns(const RelationSystem& sys, std::span<const std::uint32_t> s) {
  RelationSystem out = sys;
  out.ell = rescaled(sys.ell, sys.p, s);
  return out;
}

LinkingData rescale_columns(const LinkingData& ld, std::span<const std::uint32_t> s) {
  LinkingData out = ld;
  out.ell = rescaled(ld.ell, ld.p, s);
  return out;
}

namespace {

nlohmann::ordered_json matrix_json(const Matrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.n(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

nlohmann::ordered_json to_json(const LinkingData& ld) {
  nlohmann::ordered_json j;
  j["p"] = ld.p;
  j["primes"] = ld.qs();
  auto roots = nlohmann::ordered_json::array();
  for (const auto& r : ld.primes) roots.push_back(r.g);
  j["roots"] = roots;
  j["c"] = ld.c;
  j["ell"] = matrix_json(ld.ell);
  return j;
}

nlohmann::ordered_json to_json(const RelationSystem& sys) {
  nlohmann::ordered_json j;
  j["p"] = sys.p;
  j["c"] = sys.c;
  j["ell"] = matrix_json(sys.ell);
  return j;
}

namespace {

Matrix parse_square(const nlohmann::json& j, std::size_t d, std::uint32_t p) {
  const auto rows = j.get<std::vector<std::vector<std::uint64_t>>>();
  if (rows.size() != d) throw InvalidInput("linkdata JSON: ell has wrong shape");
  Matrix m(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (rows[a].size() != d) throw InvalidInput("linkdata JSON: ell has wrong shape");
    for (std::size_t b = 0; b < d; ++b) {
      if (rows[a][b] >= p) throw InvalidInput("linkdata JSON: ell entry out of range");
      m(a, b) = rows[a][b];
    }
  }
  return m;
}

}  // namespace

LinkingData linking_data_from_json(const nlohmann::json& j, bool verify) {
  try {
    const auto p = j.at("p").get<std::uint32_t>();
    const auto qs = j.at("primes").get<std::vector<std::uint64_t>>();
    std::vector<std::uint64_t> roots;
    if (j.contains("roots")) roots = j.at("roots").get<std::vector<std::uint64_t>>();
    if (!verify) {
      require_odd_prime(p);
      if (roots.size() != qs.size()) throw InvalidInput("linkdata JSON: roots missing");
      LinkingData ld;
      ld.p = p;
      for (std::size_t i = 0; i < qs.size(); ++i) {
        ld.primes.push_back(PrimeRecord::make(qs[i], p, roots[i]));
        ld.c.push_back(ld.primes.back().c);
      }
      ld.ell = parse_square(j.at("ell"), qs.size(), p);
      for (std::size_t i = 0; i < qs.size(); ++i) ld.ell(i, i) = 0;
      return ld;
    }
    auto ld = build_linking_data(p, qs, roots);
    if (j.contains("c") && j.at("c").get<std::vector<std::uint32_t>>() != ld.c) {
      throw InvalidInput("linkdata JSON: stored c disagrees with recomputation");
    }
    if (j.contains("ell") && parse_square(j.at("ell"), ld.d(), p) != ld.ell) {
      throw InvalidInput("linkdata JSON: stored ell disagrees with recomputation");
    }
    return ld;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("linkdata JSON: ") + e.what());
  }
}

}  // namespace linkfm
