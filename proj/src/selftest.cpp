#include "linkfm/selftest.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "linkfm/circular.hpp"
#include "linkfm/fmcheck.hpp"
#include "linkfm/lieoracle.hpp"
#include "linkfm/linkdata.hpp"

namespace linkfm {

namespace {

SuiteResult lemma_bb_suite(const SelftestOptions& o) {
  SuiteResult r{"nilpotency-lemma", true, ""};
  for (std::size_t n = 1; n < o.p && n <= 2; ++n) {
    auto res = lemma_bb_exhaustive(n, o.p, o.budget);
    if (!res.feasible) {
      r.detail += "n=" + std::to_string(n) + " infeasible; ";
      continue;
    }
    r.passed = r.passed && res.holds;
    r.detail += "n=" + std::to_string(n) + ": " + std::to_string(res.solutions) + "/" +
                std::to_string(res.pairs) + " solutions; ";
  }
  return r;
}

SuiteResult congruence_suite(const SelftestOptions& o) {
  SuiteResult r{"congruence-lemmas", true, ""};
  const std::pair<unsigned, unsigned> levels[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (auto [i, j] : levels) {
    for (std::size_t n : {2, 3}) {
      if (!commutator_congruence_check(o.p, i, j, o.samples, o.seed + i * 10 + j, n)) {
        r.passed = false;
        r.detail += "commutator (" + std::to_string(i) + "," + std::to_string(j) + ") n=" +
                    std::to_string(n) + " failed; ";
      }
    }
  }
  if (!triangular_lemma_checks(o.p, o.samples, o.seed)) {
    r.passed = false;
    r.detail += "triangular checks failed; ";
  }
  if (r.passed) r.detail = std::to_string(o.samples) + " samples per check";
  return r;
}

SuiteResult route_suite(const SelftestOptions& o) {
  SuiteResult r{"route-agreement", true, ""};
  const auto primes = eligible_primes(o.p, o.triple_bound);
  std::size_t triples = 0, failing = 0, oracle_runs = 0;
  for (std::size_t a = 0; a < primes.size(); ++a) {
    for (std::size_t b = a + 1; b < primes.size(); ++b) {
      for (std::size_t c = b + 1; c < primes.size(); ++c) {
        const std::vector<std::uint64_t> qs{primes[a].q, primes[b].q, primes[c].q};
        const auto ld = build_linking_data(o.p, qs);
        const bool fails = fm3_failure_criterion(ld);
        const bool congruence = fm3_congruence_criterion(o.p, qs);
        bool agree = fails == congruence && fm3_conditions(ld, 2).holds == !fails;
        SearchOptions so;
        so.budget = o.oracle_budget;
        so.jobs = o.jobs;
        const auto found = find_nontrivial_hom(ld.relations(), 2, so);
        if (found.status != SearchStatus::kInfeasible) {
          ++oracle_runs;
          agree = agree && (found.status == SearchStatus::kFound) == fails;
        }
        ++triples;
        failing += fails ? 1 : 0;
        if (!agree && r.passed) {
          r.passed = false;
          r.detail = "disagreement on {" + std::to_string(qs[0]) + "," + std::to_string(qs[1]) +
                     "," + std::to_string(qs[2]) + "}";
        }
      }
    }
  }
  if (r.passed) {
    r.detail = std::to_string(triples) + " triples, " + std::to_string(failing) + " failing, " +
               std::to_string(oracle_runs) + " oracle runs";
  }
  return r;
}

SuiteResult invariance_suite(const SelftestOptions& o) {
  SuiteResult r{"primitive-root-invariance", true, ""};
  const auto primes = eligible_primes(o.p, o.triple_bound);
  if (primes.size() < 4) {
    r.detail = "too few eligible primes";
    return r;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::uint32_t> scalar(1, o.p - 1);
  std::size_t checks = 0;
  for (std::size_t trial = 0; trial < 50 && r.passed; ++trial) {
    std::vector<std::size_t> idx(primes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t d = (trial % 2 == 0) ? 3 : 4;
    std::vector<std::uint64_t> qs;
    for (std::size_t k = 0; k < d; ++k) qs.push_back(primes[idx[k]].q);
    const auto ld = build_linking_data(o.p, qs);

    // Recompute with roots g^u for a unit u and compare against the column
    // scaling ell' = u^{-1} ell.
    std::vector<std::uint64_t> roots;
    std::vector<std::uint32_t> s;
    for (const auto& rec : ld.primes) {
      std::uint64_t u = 2 + rng() % (rec.q - 2);
      while (std::gcd(u, rec.q - 1) != 1) ++u;
      roots.push_back(pow_mod(rec.g, u, rec.q));
      s.push_back(static_cast<std::uint32_t>(inv_mod(u % o.p, o.p)));
    }
    const auto alt = build_linking_data(o.p, qs, roots);
    if (alt.ell != rescale_columns(ld, s).ell) {
      r.passed = false;
      r.detail = "alternate roots do not act by column scaling";
      break;
    }
    for (int k = 0; k < 10; ++k) {
      std::vector<std::uint32_t> cols(d);
      for (auto& v : cols) v = scalar(rng);
      const auto scaled = rescale_columns(ld, cols);
      ++checks;
      if (d == 3) {
        if (fm3_failure_criterion(ld) != fm3_failure_criterion(scaled) ||
            fm3_conditions(ld, 2).holds != fm3_conditions(scaled, 2).holds) {
          r.passed = false;
        }
      }
      std::vector<std::size_t> perm(d);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        if (is_circular_ordering(ld, perm) != is_circular_ordering(scaled, perm)) r.passed = false;
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!r.passed) {
        r.detail = "verdict changed under column scaling";
        break;
      }
    }
  }
  if (r.passed) r.detail = std::to_string(checks) + " scalings";
  return r;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& opts) {
  require_odd_prime(opts.p);
  std::vector<SuiteResult> out;
  out.push_back(lemma_bb_suite(opts));
  out.push_back(congruence_suite(opts));
  out.push_back(route_suite(opts));
  out.push_back(invariance_suite(opts));
  return out;
}

}  // namespace linkfm
