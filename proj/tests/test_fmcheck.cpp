#include <doctest.h>

#include <random>

#include "linkfm/fmcheck.hpp"
#include "linkfm/lieoracle.hpp"

using namespace linkfm;

namespace {

LinkingData ld_of(std::uint32_t p, std::vector<std::uint64_t> qs) {
  return build_linking_data(p, qs);
}

RelationSystem random_system(std::uint32_t p, std::mt19937_64& rng, bool allow_zero = true) {
  std::vector<std::uint32_t> c(3);
  for (auto& v : c) v = 1 + rng() % (p - 1);
  Matrix ell(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) ell(i, j) = allow_zero ? rng() % p : 1 + rng() % (p - 1);
    }
  }
  return RelationSystem::make(p, c, ell);
}

/// A system meeting the failure equalities: choose ell_13, ell_21, ell_12
/// freely and solve for the rest.
RelationSystem failing_system(std::uint32_t p, std::mt19937_64& rng) {
  const PrimeField f{p};
  std::vector<std::uint32_t> c(3);
  for (auto& v : c) v = 1 + rng() % (p - 1);
  Matrix ell(3);
  ell(0, 2) = 1 + rng() % (p - 1);
  ell(1, 0) = 1 + rng() % (p - 1);
  ell(0, 1) = 1 + rng() % (p - 1);
  // ell_23 = -c_2 ell_13 / c_1, ell_31 = -c_3 ell_21 / c_2, ell_32 = -c_3 ell_12 / c_1
  ell(1, 2) = f.neg(f.div(f.mul(c[1], ell(0, 2)), c[0]));
  ell(2, 0) = f.neg(f.div(f.mul(c[2], ell(1, 0)), c[1]));
  ell(2, 1) = f.neg(f.div(f.mul(c[2], ell(0, 1)), c[0]));
  return RelationSystem::make(p, c, ell);
}

}  // namespace

TEST_CASE("fm_small") {
  CHECK(fm_small(ld_of(3, {7})).holds);
  CHECK(fm_small(ld_of(3, {7, 31})).route == FmRoute::kSmallSet);
  CHECK_THROWS_AS(fm_small(ld_of(3, {7, 31, 229})), InvalidInput);
}

TEST_CASE("published failing triples") {
  const auto a = ld_of(3, {7, 31, 229});
  const auto b = ld_of(5, {11, 31, 1021});
  CHECK_FALSE(fm3_conditions(a, 2).holds);
  CHECK(fm3_conditions(a, 2).route == FmRoute::kFailureEqualities);
  CHECK_FALSE(fm3_conditions(b, 2).holds);
  CHECK_FALSE(fm3_conditions(b, 4).holds);
  CHECK(fm3_failure_criterion(a));
  CHECK(fm3_failure_criterion(b));
  CHECK(fm3_congruence_criterion(3, {7, 31, 229}));
  CHECK(fm3_congruence_criterion(5, {11, 31, 1021}));
}

TEST_CASE("fm3 guards") {
  const auto a = ld_of(3, {7, 31, 229});
  CHECK_THROWS_AS(fm3_conditions(a, 3), InvalidInput);
  CHECK_THROWS_AS(fm3_conditions(a, 1), InvalidInput);
  CHECK_THROWS_AS(fm3_conditions(ld_of(3, {7, 31}), 2), InvalidInput);
  CHECK_THROWS_AS(fm3_failure_criterion(ld_of(3, {7, 31, 229, 13})), InvalidInput);
  CHECK_THROWS_AS(fm3_congruence_criterion(3, {7, 19, 31}), InvalidInput);
  CHECK_THROWS_AS(fm3_congruence_criterion(3, {7, 7, 31}), InvalidInput);
}

TEST_CASE("a zero linking number decides by condition (a)") {
  // {7, 13, 31} for p = 3: look for the first zero and compare.
  const auto ld = ld_of(3, {7, 13, 31});
  bool any_zero = false;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) any_zero = any_zero || (i != j && ld.ell(i, j) == 0);
  }
  const auto v = fm3_conditions(ld, 2);
  CHECK(v.holds);
  if (any_zero) CHECK(v.route == FmRoute::kCondA);
  CHECK(fm3_congruence_criterion(3, {7, 13, 31}) == fm3_failure_criterion(ld));

  auto sys = RelationSystem::make(5, {1, 1, 1}, Matrix({{0, 0, 1}, {1, 0, 1}, {1, 1, 0}}, 5));
  const auto va = fm3_conditions(sys, 2);
  CHECK(va.route == FmRoute::kCondA);
  CHECK(va.detail == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(fm3_failure_criterion(sys));
}

TEST_CASE("dichotomy and oracle agreement, every system over F_3") {
  // All c in {1,2}^3 and all off-diagonal ell in F_3^6.
  std::size_t failing = 0, total = 0;
  for (int cm = 0; cm < 8; ++cm) {
    for (int lm = 0; lm < 729; ++lm) {
      std::vector<std::uint32_t> c{1u + (cm & 1), 1u + ((cm >> 1) & 1), 1u + ((cm >> 2) & 1)};
      Matrix ell(3);
      int code = lm;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          if (i == j) continue;
          ell(i, j) = code % 3;
          code /= 3;
        }
      }
      const auto sys = RelationSystem::make(3, c, ell);
      const bool fails = fm3_failure_criterion(sys);
      const auto v = fm3_conditions(sys, 2);
      REQUIRE(v.holds == !fails);
      const auto res = find_nontrivial_hom(sys, 2);
      REQUIRE(res.status != SearchStatus::kInfeasible);
      REQUIRE((res.status == SearchStatus::kFound) == fails);
      failing += fails;
      ++total;
    }
  }
  CHECK(total == 5832);
  CHECK(failing > 0);
}

TEST_CASE("dichotomy and oracle agreement, sampled over F_5") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 12; ++k) {
    const auto sys = (k % 2 == 0) ? failing_system(5, rng) : random_system(5, rng, k % 4 == 1);
    const bool fails = fm3_failure_criterion(sys);
    if (k % 2 == 0) REQUIRE(fails);
    for (std::uint32_t n = 2; n < 5; ++n) CHECK(fm3_conditions(sys, n).holds == !fails);
    const auto res = find_nontrivial_hom(sys, 2);
    CHECK((res.status == SearchStatus::kFound) == fails);
  }
}

TEST_CASE("dichotomy holds on random systems for larger p") {
  std::mt19937_64 rng(17);
  for (std::uint32_t p : {5u, 7u, 11u, 13u, 101u}) {
    for (int k = 0; k < 2000; ++k) {
      const auto sys = (k % 3 == 0) ? failing_system(p, rng) : random_system(p, rng, k % 3 == 1);
      const bool fails = fm3_failure_criterion(sys);
      for (std::uint32_t n : {2u, p - 1}) REQUIRE(fm3_conditions(sys, n).holds == !fails);
    }
  }
}

TEST_CASE("verdicts are invariant under column scaling") {
  std::mt19937_64 rng(23);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (int k = 0; k < 300; ++k) {
      const auto sys = (k % 2 == 0) ? failing_system(p, rng) : random_system(p, rng);
      std::vector<std::uint32_t> s(3);
      for (auto& v : s) v = 1 + rng() % (p - 1);
      const auto scaled = rescale_columns(sys, s);
      CHECK(fm3_failure_criterion(sys) == fm3_failure_criterion(scaled));
      CHECK(fm3_conditions(sys, 2).holds == fm3_conditions(scaled, 2).holds);
    }
  }
}

TEST_CASE("congruence route agrees with the equalities on real triples") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const auto recs = eligible_primes(p, p == 3 ? 400 : 1500);
    std::size_t failing = 0;
    for (std::size_t a = 0; a < recs.size(); ++a) {
      for (std::size_t b = a + 1; b < recs.size(); ++b) {
        for (std::size_t c = b + 1; c < recs.size(); ++c) {
          const std::vector<std::uint64_t> qs{recs[a].q, recs[b].q, recs[c].q};
          const auto ld = build_linking_data(p, qs);
          const bool fails = fm3_failure_criterion(ld);
          REQUIRE(fm3_congruence_criterion(p, qs) == fails);
          failing += fails;
        }
      }
    }
    CHECK(failing > 0);
  }
}

TEST_CASE("verdict JSON") {
  const auto v = fm3_conditions(ld_of(3, {7, 31, 229}), 2);
  CHECK(to_json(v).dump() == R"({"holds":false,"route":"failure-equalities","detail":[]})");
  for (auto r : {FmRoute::kSmallSet, FmRoute::kCondA, FmRoute::kCondB, FmRoute::kCondC,
                 FmRoute::kFailureEqualities, FmRoute::kCongruence}) {
    CHECK(route_from_string(to_string(r)) == r);
  }
  CHECK_THROWS_AS(route_from_string("cond-z"), InvalidInput);
}
