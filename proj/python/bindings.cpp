#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linkfm/circular.hpp"
#include "linkfm/fmcheck.hpp"
#include "linkfm/lieoracle.hpp"
#include "linkfm/linkdata.hpp"
#include "linkfm/scanstats.hpp"
#include "linkfm/selftest.hpp"

namespace py = pybind11;
using namespace linkfm;

// Structured results cross the boundary as JSON text; the Python package
// decodes them into plain dicts.

namespace {

LinkingData load(std::uint32_t p, const std::vector<std::uint64_t>& primes,
                 const std::vector<std::uint64_t>& roots) {
  return build_linking_data(p, primes, roots);
}

std::string check(std::uint32_t p, const std::vector<std::uint64_t>& primes, std::uint32_t n,
                  bool with_oracle, std::uint64_t budget) {
  const auto ld = build_linking_data(p, primes);
  nlohmann::ordered_json j;
  if (ld.d() <= 2) {
    j = to_json(fm_small(ld));
  } else {
    j = to_json(fm3_conditions(ld, n));
    j["failure_equalities"] = fm3_failure_criterion(ld);
    j["congruence"] = fm3_congruence_criterion(p, primes);
  }
  if (with_oracle) {
    SearchOptions o;
    o.budget = budget;
    const auto res = find_nontrivial_hom(ld.relations(), n, o);
    j["oracle"] = res.status == SearchStatus::kFound    ? "found"
                  : res.status == SearchStatus::kNone   ? "none"
                                                        : "infeasible";
  }
  return j.dump();
}

std::string oracle(std::uint32_t p, const std::vector<std::uint64_t>& primes, std::size_t n,
                   std::uint64_t budget, unsigned jobs) {
  const auto sys = build_linking_data(p, primes).relations();
  SearchOptions o;
  o.budget = budget;
  o.jobs = jobs;
  const auto res = find_nontrivial_hom(sys, n, o);
  if (res.status == SearchStatus::kInfeasible) {
    throw BudgetExceeded("search space exceeds the budget of " + std::to_string(budget));
  }
  nlohmann::ordered_json j;
  j["found"] = res.witness.has_value();
  j["candidates"] = res.candidates;
  if (res.witness) j["witness"] = to_json(*res.witness);
  return j.dump();
}

std::string cover(std::uint32_t p, const std::vector<std::uint64_t>& primes, std::uint64_t bound) {
  const auto res = mild_fm_cover(build_linking_data(p, primes), bound);
  nlohmann::ordered_json j;
  j["found"] = res.cover.has_value();
  j["bound"] = res.bound;
  j["placed"] = res.placed;
  if (res.cover) j["linkdata"] = to_json(*res.cover);
  return j.dump();
}

std::string scan(std::uint32_t p, std::uint64_t bound, unsigned jobs, const std::string& cache_dir) {
  ScanOptions o;
  o.jobs = jobs;
  o.cache_dir = cache_dir;
  return to_json(scan_triples(p, bound, o)).dump();
}

std::string selftest(std::uint32_t p, std::uint64_t seed, std::size_t samples) {
  SelftestOptions o;
  o.p = p;
  o.seed = seed;
  o.samples = samples;
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& s : run_selftest(o)) {
    out.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
  }
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_linkfm, m) {
  m.doc() = "Linking numbers of primes and Lie-algebra representation checks";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("is_prime", &is_prime, py::arg("n"));
  m.def("eligible_primes", [](std::uint32_t p, std::uint64_t bound) {
    std::vector<std::uint64_t> qs;
    for (const auto& r : eligible_primes(p, bound)) qs.push_back(r.q);
    return qs;
  }, py::arg("p"), py::arg("bound"));
  m.def("linking_number", [](std::uint64_t a, std::uint64_t q, std::uint32_t p) {
    return linking_number(a, PrimeRecord::make(q, p));
  }, py::arg("a"), py::arg("q"), py::arg("p"));
  m.def("_linking_data", [](std::uint32_t p, const std::vector<std::uint64_t>& primes,
                            const std::vector<std::uint64_t>& roots) {
    return to_json(load(p, primes, roots)).dump();
  }, py::arg("p"), py::arg("primes"), py::arg("roots") = std::vector<std::uint64_t>{});
  m.def("_check", &check, py::arg("p"), py::arg("primes"), py::arg("n") = 2,
        py::arg("with_oracle") = false, py::arg("budget") = 1'000'000'000ULL);
  m.def("_oracle", &oracle, py::arg("p"), py::arg("primes"), py::arg("n") = 2,
        py::arg("budget") = 1'000'000'000ULL, py::arg("jobs") = 1u,
        py::call_guard<py::gil_scoped_release>());
  m.def("is_circular", [](std::uint32_t p, const std::vector<std::uint64_t>& primes,
                          const std::vector<std::size_t>& perm) {
    return is_circular_ordering(build_linking_data(p, primes), perm);
  }, py::arg("p"), py::arg("primes"), py::arg("perm"));
  m.def("_cover", &cover, py::arg("p"), py::arg("primes"), py::arg("bound"));
  m.def("_scan", &scan, py::arg("p"), py::arg("bound"), py::arg("jobs") = 1u,
        py::arg("cache_dir") = "", py::call_guard<py::gil_scoped_release>());
  m.def("_selftest", &selftest, py::arg("p") = 3u, py::arg("seed") = kDefaultSeed,
        py::arg("samples") = 200);
}
