#include <doctest.h>

#include <numeric>

#include "linkfm/circular.hpp"
#include "linkfm/lieoracle.hpp"

using namespace linkfm;

namespace {

std::vector<std::size_t> identity_perm(std::size_t d) {
  std::vector<std::size_t> v(d);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

/// A d = 2m system shaped like the cover pattern: cycle entries nonzero,
/// everything touching an odd (one-based) position otherwise zero.
RelationSystem pattern_system(std::uint32_t p, std::size_t d, std::uint32_t fwd, std::uint32_t back) {
  Matrix ell(d);
  for (std::size_t i = 0; i < d; ++i) {
    ell(i, (i + 1) % d) = fwd;
    ell((i + 1) % d, i) = back;
  }
  // Even-even pairs (zero-based odd) may be anything; set one of them.
  if (d >= 6) ell(1, 5) = 1;
  return RelationSystem::make(p, std::vector<std::uint32_t>(d, 1), ell);
}

}  // namespace

TEST_CASE("odd length is never circular") {
  const auto ld = build_linking_data(3, std::vector<std::uint64_t>{7, 31, 229});
  for (const auto& perm : {std::vector<std::size_t>{0, 1, 2}, std::vector<std::size_t>{2, 0, 1}}) {
    CHECK_FALSE(is_circular_ordering(ld, perm));
  }
  CHECK_FALSE(find_circular_ordering(ld).perm);
}

TEST_CASE("cover shaped systems are circular") {
  CHECK(is_circular_ordering(pattern_system(11, 4, 1, 2), identity_perm(4)));
  CHECK(is_circular_ordering(pattern_system(11, 6, 1, 2), identity_perm(6)));
  // Equal cycle products violate the last condition: 2^4 = 1 mod 5.
  CHECK_FALSE(is_circular_ordering(pattern_system(5, 4, 1, 2), identity_perm(4)));
  CHECK_FALSE(is_circular_ordering(pattern_system(11, 4, 1, 1), identity_perm(4)));
  // All zero fails adjacency.
  const auto zero = RelationSystem::make(3, {1, 1, 1, 1}, Matrix(4));
  CHECK_FALSE(is_circular_ordering(zero, identity_perm(4)));
  CHECK_FALSE(find_circular_ordering(zero).perm);
}

TEST_CASE("two primes are never circular") {
  const auto ld = build_linking_data(3, std::vector<std::uint64_t>{7, 31});
  CHECK_FALSE(find_circular_ordering(ld).perm);
  const auto sys = RelationSystem::make(5, {1, 1}, Matrix({{0, 1}, {3, 0}}, 5));
  CHECK_FALSE(find_circular_ordering(sys).perm);
}

TEST_CASE("all nonzero d = 4 fails the odd-odd condition") {
  const auto sys = RelationSystem::make(5, {1, 1, 1, 1},
                                        Matrix({{0, 1, 2, 3}, {4, 0, 1, 2}, {3, 4, 0, 1}, {2, 3, 4, 0}}, 5));
  CHECK_FALSE(find_circular_ordering(sys).perm);
}

TEST_CASE("search finds a relabelled ordering") {
  const auto base = pattern_system(11, 4, 1, 2);
  // Relabel so the identity no longer works: new index k holds old perm[k].
  const std::vector<std::size_t> shuffle{2, 0, 3, 1};
  Matrix ell(4);
  std::vector<std::size_t> where(4);
  for (std::size_t k = 0; k < 4; ++k) where[shuffle[k]] = k;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) ell(where[a], where[b]) = base.ell(a, b);
  }
  const auto sys = RelationSystem::make(11, {1, 1, 1, 1}, ell);
  CHECK_FALSE(is_circular_ordering(sys, identity_perm(4)));
  const auto found = find_circular_ordering(sys);
  REQUIRE(found.perm);
  CHECK(is_circular_ordering(sys, *found.perm));
}

TEST_CASE("ordering guards") {
  const auto sys = pattern_system(11, 4, 1, 2);
  CHECK_THROWS_AS(is_circular_ordering(sys, std::vector<std::size_t>{0, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(is_circular_ordering(sys, std::vector<std::size_t>{0, 1, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(is_circular_ordering(sys, std::vector<std::size_t>{0, 1, 2, 4}), InvalidInput);
  const auto big = RelationSystem::make(3, std::vector<std::uint32_t>(12, 1), Matrix(12));
  CHECK_FALSE(find_circular_ordering(big).feasible);
}

TEST_CASE("link constraints") {
  CHECK(satisfies(LinkConstraint::kZero, 0));
  CHECK_FALSE(satisfies(LinkConstraint::kZero, 2));
  CHECK(satisfies(LinkConstraint::kNonzero, 1));
  CHECK(satisfies(LinkConstraint::kAny, 0));
  for (auto c : {LinkConstraint::kZero, LinkConstraint::kNonzero, LinkConstraint::kAny}) {
    CHECK(constraint_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(constraint_from_string("sometimes"), InvalidInput);
}

TEST_CASE("extension with a pattern") {
  const auto ld = build_linking_data(3, std::vector<std::uint64_t>{7});
  const auto any = extend_with_pattern(ld, {{7, LinkConstraint::kAny, LinkConstraint::kAny}}, 1000);
  REQUIRE(any.prime);
  CHECK(*any.prime == 13);  // smallest eligible prime other than 7

  const auto nn = extend_with_pattern(ld, {{7, LinkConstraint::kNonzero, LinkConstraint::kNonzero}}, 1000);
  REQUIRE(nn.prime);
  REQUIRE(nn.extended);
  CHECK(nn.extended->primes.back().q == *nn.prime);
  CHECK(nn.extended->ell(1, 0) != 0);
  CHECK(nn.extended->ell(0, 1) != 0);
  // No smaller eligible prime qualifies.
  for (const auto& rec : eligible_primes(3, *nn.prime - 1)) {
    if (rec.q == 7) continue;
    const auto two = build_linking_data(3, std::vector<std::uint64_t>{7, rec.q});
    CHECK_FALSE((two.ell(1, 0) != 0 && two.ell(0, 1) != 0));
  }

  const auto tiny = extend_with_pattern(ld, {{7, LinkConstraint::kAny, LinkConstraint::kAny}}, 12);
  CHECK_FALSE(tiny.prime);
  CHECK(tiny.bound == 12);

  CHECK_THROWS_AS(extend_with_pattern(ld, {}, 100), InvalidInput);
  CHECK_THROWS_AS(extend_with_pattern(ld, {{13, LinkConstraint::kAny, LinkConstraint::kAny}}, 100),
                  InvalidInput);
}

TEST_CASE("pattern JSON") {
  const auto j = nlohmann::json::parse(R"([{"q":7,"out":"nonzero","in":"zero"}])");
  const auto pat = pattern_from_json(j);
  REQUIRE(pat.size() == 1);
  CHECK(pat[0].q == 7);
  CHECK(pat[0].out == LinkConstraint::kNonzero);
  CHECK(pat[0].in == LinkConstraint::kZero);
  CHECK(to_json(pat).dump() == R"([{"q":7,"out":"nonzero","in":"zero"}])");
  CHECK_THROWS_AS(pattern_from_json(nlohmann::json::parse(R"({"q":7})")), InvalidInput);
  CHECK_THROWS_AS(pattern_from_json(nlohmann::json::parse(R"([{"q":7,"out":"x","in":"zero"}])")),
                  InvalidInput);
}

TEST_CASE("mild cover") {
  const auto ld = build_linking_data(3, std::vector<std::uint64_t>{7, 13});
  const auto res = mild_fm_cover(ld, 100000);
  REQUIRE(res.cover);
  const auto& cover = *res.cover;
  REQUIRE(cover.primes.size() == 4);
  CHECK(cover.primes[1].q == 7);
  CHECK(cover.primes[3].q == 13);
  // Regression data from the search itself.
  CHECK(cover.qs() == std::vector<std::uint64_t>{157, 7, 601, 13});
  CHECK(verify_cover_pattern(cover));
  CHECK(is_circular_ordering(cover, identity_perm(4)));
  // Rebuilt from the primes alone, the pattern still holds.
  const auto rebuilt = build_linking_data(3, cover.qs());
  CHECK(verify_cover_pattern(rebuilt));
  CHECK(res.placed == 2);

  // The oracle agrees that n = 2 admits no nonzero homomorphism.
  CHECK(find_nontrivial_hom(cover.relations(), 2).status == SearchStatus::kNone);

  // Cover status does not depend on the choice of primitive roots.
  std::vector<std::uint32_t> s{2, 1, 2, 2};
  CHECK(is_circular_ordering(rescale_columns(cover, s), identity_perm(4)));

  const auto triple = mild_fm_cover(build_linking_data(3, std::vector<std::uint64_t>{7, 31, 229}), 1000000);
  REQUIRE(triple.cover);
  CHECK(triple.cover->qs() == std::vector<std::uint64_t>{2383, 7, 198031, 31, 263101, 229});

  CHECK_THROWS_AS(mild_fm_cover(build_linking_data(3, std::vector<std::uint64_t>{7}), 1000), InvalidInput);
  const auto small = mild_fm_cover(ld, 40);
  CHECK_FALSE(small.cover);
  CHECK(small.bound == 40);
}

TEST_CASE("cover pattern detects violations") {
  // Published triple plus one more prime: every pair is linked, so the
  // zero constraints cannot hold.
  const auto ld = build_linking_data(3, std::vector<std::uint64_t>{7, 31, 229, 13});
  bool all_nonzero = true;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) all_nonzero = all_nonzero && (i == j || ld.ell(i, j) != 0);
  }
  if (all_nonzero) CHECK_FALSE(verify_cover_pattern(ld));
  CHECK_FALSE(verify_cover_pattern(build_linking_data(3, std::vector<std::uint64_t>{7, 31, 229})));
}
