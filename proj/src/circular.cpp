#include "linkfm/circular.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace linkfm {

std::string to_string(LinkConstraint c) {
  switch (c) {
    case LinkConstraint::kZero: return "zero";
    case LinkConstraint::kNonzero: return "nonzero";
    case LinkConstraint::kAny: return "any";
  }
  return "any";
}

LinkConstraint constraint_from_string(const std::string& s) {
  if (s == "zero") return LinkConstraint::kZero;
  if (s == "nonzero") return LinkConstraint::kNonzero;
  if (s == "any") return LinkConstraint::kAny;
  throw InvalidInput("unknown link constraint '" + s + "' (expected zero, nonzero or any)");
}

bool satisfies(LinkConstraint c, std::uint64_t value) {
  switch (c) {
    case LinkConstraint::kZero: return value == 0;
    case LinkConstraint::kNonzero: return value != 0;
    case LinkConstraint::kAny: return true;
  }
  return true;
}

LinkPattern pattern_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("pattern JSON must be an array");
  LinkPattern out;
  try {
    for (const auto& e : j) {
      PatternSlot slot;
      slot.q = e.at("q").get<std::uint64_t>();
      slot.out = constraint_from_string(e.value("out", std::string("any")));
      slot.in = constraint_from_string(e.value("in", std::string("any")));
      out.push_back(slot);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("pattern JSON: ") + e.what());
  }
  return out;
}

nlohmann::ordered_json to_json(const LinkPattern& pattern) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : pattern) {
    nlohmann::ordered_json e;
    e["q"] = s.q;
    e["out"] = to_string(s.out);
    e["in"] = to_string(s.in);
    arr.push_back(e);
  }
  return arr;
}

namespace {

void require_permutation(std::span<const std::size_t> perm, std::size_t d) {
  if (perm.size() != d) {
    throw InvalidInput("ordering has " + std::to_string(perm.size()) + " entries, expected " +
                       std::to_string(d));
  }
  std::vector<bool> seen(d, false);
  for (auto v : perm) {
    if (v >= d || seen[v]) throw InvalidInput("ordering is not a permutation of 0.." + std::to_string(d - 1));
    seen[v] = true;
  }
}

}  // namespace

bool is_circular_ordering(const RelationSystem& sys, std::span<const std::size_t> perm) {
  const auto d = sys.d();
  require_permutation(perm, d);
  if (d < 2 || d % 2 == 1) return false;
  const PrimeField f{sys.p};
  // One-based relabelled entry.
  auto l = [&](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(sys.ell(perm[i - 1], perm[j - 1]));
  };
  for (std::size_t i = 1; i < d; ++i) {
    if (l(i, i + 1) == 0) return false;
  }
  if (l(d, 1) == 0) return false;
  for (std::size_t i = 1; i <= d; i += 2) {
    for (std::size_t j = 1; j <= d; j += 2) {
      if (i != j && l(i, j) != 0) return false;
    }
  }
  std::uint32_t forward = l(d, 1);
  for (std::size_t i = 1; i < d; ++i) forward = f.mul(forward, l(i, i + 1));
  std::uint32_t backward = l(1, d);
  for (std::size_t i = d; i > 1; --i) backward = f.mul(backward, l(i, i - 1));
  return forward != backward;
}

OrderingResult find_circular_ordering(const RelationSystem& sys) {
  const auto d = sys.d();
  if (d > kMaxCircularSearch) return OrderingResult{false, std::nullopt};
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  if (d < 2 || d % 2 == 1) return OrderingResult{true, std::nullopt};
  do {
    if (is_circular_ordering(sys, perm)) return OrderingResult{true, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return OrderingResult{true, std::nullopt};
}

namespace {

/// Eligible primes in ascending order, generated lazily.
class EligibleScan {
 public:
  EligibleScan(std::uint32_t p, std::uint64_t bound) : p_(p), bound_(bound), q_(1 + 2ULL * p) {}

  std::optional<PrimeRecord> next() {
    const std::uint64_t p2 = std::uint64_t{p_} * p_;
    for (; q_ <= bound_; q_ += 2ULL * p_) {
      const auto q = q_;
      if (q % p2 == 1 || !is_prime(q)) continue;
      q_ += 2ULL * p_;
      return PrimeRecord::make(q, p_);
    }
    return std::nullopt;
  }

 private:
  std::uint32_t p_;
  std::uint64_t bound_;
  std::uint64_t q_;
};

}  // namespace

ExtensionResult extend_with_pattern(const LinkingData& ld, const LinkPattern& pattern,
                                    std::uint64_t bound) {
  const auto qs = ld.qs();
  if (pattern.size() != qs.size()) {
    throw InvalidInput("pattern has " + std::to_string(pattern.size()) + " slots for " +
                       std::to_string(qs.size()) + " primes");
  }
  std::map<std::uint64_t, const PatternSlot*> by_prime;
  for (const auto& slot : pattern) {
    if (std::find(qs.begin(), qs.end(), slot.q) == qs.end()) {
      throw InvalidInput("pattern names " + std::to_string(slot.q) + ", which is not in the set");
    }
    if (!by_prime.emplace(slot.q, &slot).second) {
      throw InvalidInput("pattern names " + std::to_string(slot.q) + " twice");
    }
  }

  ExtensionResult result;
  result.bound = bound;
  EligibleScan scan(ld.p, bound);
  while (auto cand = scan.next()) {
    if (std::find(qs.begin(), qs.end(), cand->q) != qs.end()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < ld.d() && ok; ++i) {
      const auto* slot = by_prime.at(qs[i]);
      ok = satisfies(slot->out, linking_number(cand->q, ld.primes[i])) &&
           satisfies(slot->in, linking_number(qs[i], *cand));
    }
    if (!ok) continue;
    auto extended_qs = qs;
    extended_qs.push_back(cand->q);
    std::vector<std::uint64_t> roots;
    for (const auto& r : ld.primes) roots.push_back(r.g);
    roots.push_back(cand->g);
    result.prime = cand->q;
    result.extended = build_linking_data(ld.p, extended_qs, roots);
    return result;
  }
  return result;
}

namespace {

/// Required constraint between zero-based cover positions a != b.
LinkConstraint cover_constraint(std::size_t a, std::size_t b, std::size_t size) {
  const bool adjacent = (b == a + 1) || (a == size - 1 && b == 0);
  if (adjacent) return LinkConstraint::kNonzero;
  // One-based odd positions are the zero-based even ones.
  if (a % 2 == 0 || b % 2 == 0) return LinkConstraint::kZero;
  return LinkConstraint::kAny;
}

}  // namespace

bool verify_cover_pattern(const LinkingData& cover) {
  const auto size = cover.d();
  if (size < 2 || size % 2 == 1) return false;
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      const auto value = linking_number(cover.primes[a].q, cover.primes[b]);
      if (value != cover.ell(a, b)) return false;
      if (!satisfies(cover_constraint(a, b, size), value)) return false;
    }
  }
  return true;
}

CoverResult mild_fm_cover(const LinkingData& ld, std::uint64_t bound) {
  const auto d = ld.d();
  if (d == 0) throw InvalidInput("mild_fm_cover: the set is empty");
  if (d == 1) {
    throw InvalidInput(
        "mild_fm_cover: a single prime doubles to two primes, and a two-element ordering "
        "never satisfies the cycle-product inequality");
  }
  const auto size = 2 * d;
  const auto qs = ld.qs();

  // Candidates per new slot k (zero-based position 2k), filtered against the
  // originals (position 2i + 1 holds ld.primes[i]).
  std::vector<std::vector<PrimeRecord>> candidates(d);
  EligibleScan scan(ld.p, bound);
  while (auto cand = scan.next()) {
    if (std::find(qs.begin(), qs.end(), cand->q) != qs.end()) continue;
    std::vector<std::uint32_t> out(d), in(d);
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = linking_number(cand->q, ld.primes[i]);
      in[i] = linking_number(qs[i], *cand);
    }
    for (std::size_t k = 0; k < d; ++k) {
      const auto pos = 2 * k;
      bool ok = true;
      for (std::size_t i = 0; i < d && ok; ++i) {
        const auto orig = 2 * i + 1;
        ok = satisfies(cover_constraint(pos, orig, size), out[i]) &&
             satisfies(cover_constraint(orig, pos, size), in[i]);
      }
      if (ok) candidates[k].push_back(*cand);
    }
  }

  CoverResult result;
  result.bound = bound;
  std::vector<const PrimeRecord*> chosen;
  std::set<std::uint64_t> used;

  // Depth-first over the new slots; two new primes must not link either way.
  auto compatible = [&](const PrimeRecord& cand) {
    if (used.count(cand.q)) return false;
    for (const auto* prev : chosen) {
      if (linking_number(cand.q, *prev) != 0 || linking_number(prev->q, cand) != 0) return false;
    }
    return true;
  };
  std::vector<std::size_t> cursor(d, 0);
  std::size_t k = 0;
  while (k < d) {
    bool placed = false;
    for (; cursor[k] < candidates[k].size(); ++cursor[k]) {
      const auto& cand = candidates[k][cursor[k]];
      if (!compatible(cand)) continue;
      chosen.push_back(&cand);
      used.insert(cand.q);
      ++cursor[k];
      placed = true;
      break;
    }
    if (placed) {
      result.placed = std::max(result.placed, chosen.size());
      ++k;
      if (k < d) cursor[k] = 0;
      continue;
    }
    if (k == 0) return result;  // bound exhausted
    --k;
    used.erase(chosen.back()->q);
    chosen.pop_back();
  }

  std::vector<std::uint64_t> order;
  for (std::size_t i = 0; i < d; ++i) {
    order.push_back(chosen[i]->q);
    order.push_back(qs[i]);
  }
  // Recomputed from scratch rather than trusted from the search state.
  auto cover = build_linking_data(ld.p, order);
  std::vector<std::size_t> identity(size);
  std::iota(identity.begin(), identity.end(), 0);
  if (!verify_cover_pattern(cover) || !is_circular_ordering(cover, identity)) {
    throw std::logic_error("mild_fm_cover: constructed set failed post-verification");
  }
  result.cover = std::move(cover);
  return result;
}

}  // namespace linkfm
