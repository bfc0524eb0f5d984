#include <doctest.h>

#include <random>

#include "linkfm/fmcheck.hpp"
#include "linkfm/lieoracle.hpp"

using namespace linkfm;

namespace {

/// Relations with every c_i = -1 and ell_12 = ell_13 = ell_21 = 1,
/// ell_23 = ell_31 = ell_32 = -1, and the explicit witness
/// A_1 = h E12, A_2 = h E21, A_3 = h [[1, 1], [-1, -1]] with h = -1/2.
RelationSystem witness_system(std::uint32_t p) {
  const std::uint32_t m1 = p - 1;
  return RelationSystem::make(p, {m1, m1, m1}, Matrix({{0, 1, 1}, {1, 0, m1}, {m1, m1, 0}}, p));
}

std::vector<Matrix> witness_mats(std::uint32_t p) {
  const PrimeField f{p};
  const std::uint32_t h = f.neg(f.inv(2));
  const std::uint32_t mh = f.neg(h);
  return {Matrix({{0, h}, {0, 0}}, p), Matrix({{0, 0}, {h, 0}}, p),
          Matrix({{h, h}, {mh, mh}}, p)};
}

RelationSystem random_system(std::uint32_t p, std::size_t d, std::mt19937_64& rng) {
  std::vector<std::uint32_t> c(d);
  for (auto& v : c) v = 1 + rng() % (p - 1);
  Matrix ell(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j) ell(i, j) = rng() % p;
    }
  }
  return RelationSystem::make(p, c, ell);
}

}  // namespace

TEST_CASE("explicit witness is a homomorphism and every perturbation is not") {
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const auto sys = witness_system(p);
    const auto mats = witness_mats(p);
    CHECK(check_hom(sys, mats));
    CHECK(fm3_failure_criterion(sys));
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t s = 0; s < 2; ++s) {
          for (std::uint32_t delta = 1; delta < p; ++delta) {
            auto bad = mats;
            bad[k](r, s) = (bad[k](r, s) + delta) % p;
            CHECK_FALSE(check_hom(sys, bad));
          }
        }
      }
    }
  }
}

TEST_CASE("check_hom guards") {
  const auto sys = witness_system(3);
  auto mats = witness_mats(3);
  mats.pop_back();
  CHECK_THROWS_AS(check_hom(sys, mats), InvalidInput);
  std::vector<Matrix> mixed{Matrix(2), Matrix(3), Matrix(2)};
  CHECK_THROWS_AS(check_hom(sys, mixed), InvalidInput);
  std::vector<Matrix> zero{Matrix(2), Matrix(2), Matrix(2)};
  CHECK(check_hom(sys, zero));
}

TEST_CASE("oracle finds witnesses on the published triples") {
  for (auto [p, qs] : {std::pair{3u, std::vector<std::uint64_t>{7, 31, 229}},
                       std::pair{5u, std::vector<std::uint64_t>{11, 31, 1021}}}) {
    const auto sys = build_linking_data(p, qs).relations();
    const auto res = find_nontrivial_hom(sys, 2);
    REQUIRE(res.status == SearchStatus::kFound);
    REQUIRE(res.witness);
    CHECK(check_hom(sys, res.witness->mats));
    bool nonzero = false;
    for (const auto& a : res.witness->mats) nonzero = nonzero || !a.is_zero();
    CHECK(nonzero);
  }
  // Regression: the lexicographically first witness for p = 3.
  const auto res = find_nontrivial_hom(build_linking_data(3, std::vector<std::uint64_t>{7, 31, 229}).relations(), 2);
  CHECK(res.witness->mats[0] == Matrix({{0, 0}, {1, 0}}, 3));
  CHECK(res.witness->mats[1] == Matrix({{0, 2}, {0, 0}}, 3));
  CHECK(res.witness->mats[2] == Matrix({{2, 2}, {1, 1}}, 3));
}

TEST_CASE("trace-zero restriction loses nothing") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto sys = random_system(3, 3, rng);
    SearchOptions full;
    full.trace_zero = false;
    const auto a = find_nontrivial_hom(sys, 2);
    const auto b = find_nontrivial_hom(sys, 2, full);
    CHECK(a.status == b.status);
    if (b.witness) {
      for (const auto& m : b.witness->mats) CHECK(trace(m, 3) == 0);
    }
  }
  const auto sys = witness_system(3);
  SearchOptions full;
  full.trace_zero = false;
  CHECK(find_nontrivial_hom(sys, 2, full).status == SearchStatus::kFound);
}

TEST_CASE("search is deterministic and independent of job count") {
  const auto sys = build_linking_data(5, std::vector<std::uint64_t>{11, 31, 1021}).relations();
  const auto one = find_nontrivial_hom(sys, 2);
  for (unsigned jobs : {2u, 3u, 8u}) {
    SearchOptions o;
    o.jobs = jobs;
    const auto many = find_nontrivial_hom(sys, 2, o);
    CHECK(many.status == one.status);
    CHECK(many.witness == one.witness);
    CHECK(many.candidates == one.candidates);
  }
  CHECK(find_nontrivial_hom(sys, 2).witness == one.witness);
}

TEST_CASE("budget makes the search infeasible") {
  const auto sys = witness_system(5);
  SearchOptions o;
  o.budget = 1000;
  const auto r = find_nontrivial_hom(sys, 2, o);
  CHECK(r.status == SearchStatus::kInfeasible);
  CHECK_FALSE(r.witness);
}

TEST_CASE("pairs of real primes admit no nonzero homomorphism") {
  for (auto qs : {std::vector<std::uint64_t>{7, 13}, std::vector<std::uint64_t>{7, 31},
                  std::vector<std::uint64_t>{31, 229}, std::vector<std::uint64_t>{13, 19 + 24}}) {
    if (!eligibility_error(qs[1], 3).empty()) continue;
    const auto sys = build_linking_data(3, qs).relations();
    CHECK(find_nontrivial_hom(sys, 2).status == SearchStatus::kNone);
  }
}

TEST_CASE("cycle system") {
  const auto sys = cycle_system(3, 2, {1, 2, 1, 2});
  CHECK(sys.d() == 4);
  CHECK(sys.ell(0, 1) == 1);
  CHECK(sys.ell(3, 0) == 1);
  CHECK(sys.ell(1, 0) == 0);
  CHECK(find_nontrivial_hom(sys, 2).status == SearchStatus::kNone);
  CHECK_THROWS_AS(cycle_system(3, 1, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(cycle_system(3, 2, {1, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(cycle_system(3, 2, {1, 1, 0, 1}), InvalidInput);
}

TEST_CASE("nilpotency") {
  CHECK(is_nilpotent(Matrix({{0, 1}, {0, 0}}, 3), 3));
  CHECK_FALSE(is_nilpotent(Matrix({{1, 0}, {0, 0}}, 3), 3));
  CHECK(is_nilpotent(Matrix({{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}, 5), 5));
  CHECK(is_nilpotent(Matrix({{1, 1}, {2, 2}}, 3), 3));  // rank one, trace zero

  const auto r1 = lemma_bb_exhaustive(1, 3);
  CHECK(r1.feasible);
  CHECK(r1.holds);
  CHECK(r1.pairs == 9);
  CHECK(r1.solutions == 3);  // A = 0 only

  for (std::uint32_t p : {3u, 5u}) {
    const auto r = lemma_bb_exhaustive(2, p);
    CHECK(r.feasible);
    CHECK(r.holds);
    const std::uint64_t q4 = std::uint64_t{p} * p * p * p;
    CHECK(r.pairs == q4 * q4);
    CHECK(r.solutions >= q4);
  }
  CHECK_FALSE(lemma_bb_exhaustive(2, 5, 1000).feasible);
  CHECK_THROWS_AS(lemma_bb_exhaustive(3, 3), InvalidInput);
  CHECK_THROWS_AS(lemma_bb_exhaustive(0, 3), InvalidInput);
}

TEST_CASE("modular inverse of matrices") {
  const Matrix a({{1, 3}, {0, 1}}, 27);
  const auto inv = inverse(a, 27);
  CHECK(multiply(a, inv, 27) == Matrix::identity(2));
  CHECK_THROWS_AS(inverse(Matrix({{3, 0}, {0, 1}}, 27), 27), InvalidInput);
}

TEST_CASE("congruence lemmas hold on random samples") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (unsigned i = 1; i <= 2; ++i) {
      for (unsigned j = 1; j <= 2; ++j) {
        CHECK(commutator_congruence_check(p, i, j, 200, kDefaultSeed, 2));
        CHECK(commutator_congruence_check(p, i, j, 50, kDefaultSeed, 3));
      }
    }
    CHECK(commutator_with_unipotent_check(p, 200, kDefaultSeed));
    CHECK(unipotent_power_check(p, 200, kDefaultSeed));
    CHECK(det_one_trace_check(p, 200, kDefaultSeed, 2));
    CHECK(det_one_trace_check(p, 50, kDefaultSeed, 3));
    CHECK(triangular_lemma_checks(p, 100, 99));
  }
}

TEST_CASE("truncated matrices") {
  TruncatedMatrix t{3, 3, Matrix({{26, 10}, {4, 1}}, 27)};
  CHECK(t.modulus() == 27);
  const auto r = t.reduced(1);
  CHECK(r.modulus() == 3);
  CHECK(r.m == Matrix({{2, 1}, {1, 1}}, 3));
}

TEST_CASE("witness JSON round trip") {
  const auto sys = witness_system(5);
  const HomWitness w{sys, 2, witness_mats(5)};
  const auto j = to_json(w);
  CHECK(j["n"] == 2);
  CHECK(j["p"] == 5);
  CHECK(j["mats"].size() == 3);
  CHECK(witness_from_json(nlohmann::json::parse(j.dump()), sys) == w);
}
