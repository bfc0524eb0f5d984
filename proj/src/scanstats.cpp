#include "linkfm/scanstats.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace linkfm {

namespace {

std::uint64_t choose3(std::uint64_t n) {
  return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint32_t p,
                                 std::uint64_t bound) {
  const std::string key = "p=" + std::to_string(p) + ";bound=" + std::to_string(bound) +
                          ";roots=smallest;format=1";
  std::ostringstream name;
  name << "linkdata-" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(key) << ".json";
  return dir / name.str();
}

ScanReport scan_linking_data(const LinkingData& all, std::uint64_t bound, unsigned jobs) {
  const auto n = all.d();
  const auto p = all.p;
  const PrimeField f{p};
  ScanReport report;
  report.p = p;
  report.bound = bound;
  report.eligible_count = n;
  report.triple_count = choose3(n);

  // ratio[i * n + j] = ell_ij / c_i; zero exactly when ell_ij is.
  std::vector<std::uint32_t> ratio(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto inv_c = f.inv(all.c[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) ratio[i * n + j] = f.mul(static_cast<std::uint32_t>(all.ell(i, j)), inv_c);
    }
  }
  auto r = [&](std::size_t i, std::size_t j) { return ratio[i * n + j]; };
  auto fails = [&](std::size_t a, std::size_t b, std::size_t k) {
    if (!r(a, b) || !r(a, k) || !r(b, a) || !r(b, k) || !r(k, a) || !r(k, b)) return false;
    return r(a, k) == f.neg(r(b, k)) && r(b, a) == f.neg(r(k, a)) && r(a, b) == f.neg(r(k, b));
  };

  jobs = std::max(1u, jobs);
  std::vector<std::vector<Triple>> local(jobs);
  auto worker = [&](unsigned w) {
    for (std::size_t a = w; a < n; a += jobs) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t k = b + 1; k < n; ++k) {
          if (fails(a, b, k)) local[w].push_back({all.primes[a].q, all.primes[b].q, all.primes[k].q});
        }
      }
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }
  for (auto& l : local) report.failures.insert(report.failures.end(), l.begin(), l.end());
  std::sort(report.failures.begin(), report.failures.end());
  return report;
}

ScanReport scan_triples(std::uint32_t p, std::uint64_t bound, const ScanOptions& opts) {
  require_odd_prime(p);
  if (bound < std::uint64_t{p} + 1) {
    throw InvalidInput("scan bound must be at least p+1, got " + std::to_string(bound));
  }
  std::optional<LinkingData> all;
  std::filesystem::path cache;
  if (!opts.cache_dir.empty()) {
    cache = cache_path(opts.cache_dir, p, bound);
    if (std::filesystem::exists(cache)) {
      std::ifstream in(cache);
      try {
        all = linking_data_from_json(nlohmann::json::parse(in), /*verify=*/false);
      } catch (const std::exception&) {
        all.reset();  // unreadable cache entries are rebuilt
      }
    }
  }
  if (!all) {
    const auto records = eligible_primes(p, bound);
    if (records.size() > opts.max_eligible) {
      throw BudgetExceeded("scan: " + std::to_string(records.size()) +
                           " eligible primes exceed the cap of " + std::to_string(opts.max_eligible));
    }
    std::vector<std::uint64_t> qs;
    for (const auto& r : records) qs.push_back(r.q);
    all = build_linking_data(p, qs);
    if (!cache.empty()) {
      std::filesystem::create_directories(cache.parent_path());
      const auto tmp = cache.string() + ".tmp";
      {
        std::ofstream out(tmp);
        out << to_json(*all).dump() << '\n';
      }
      std::filesystem::rename(tmp, cache);
    }
  } else if (all->d() > opts.max_eligible) {
    throw BudgetExceeded("scan: cached set exceeds the eligible-prime cap");
  }
  return scan_linking_data(*all, bound, opts.jobs);
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "table") return ReportFormat::kTable;
  throw InvalidInput("unknown format '" + s + "' (expected json, csv or table)");
}

namespace {

std::string decimal(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace

nlohmann::ordered_json to_json(const ScanReport& report) {
  nlohmann::ordered_json j;
  j["p"] = report.p;
  j["bound"] = report.bound;
  j["eligible_count"] = report.eligible_count;
  j["triple_count"] = report.triple_count;
  j["failure_fraction"] = {{"numerator", report.failure_count()},
                           {"denominator", report.triple_count},
                           {"decimal", report.failure_fraction()}};
  j["failures"] = report.failures;
  return j;
}

ScanReport scan_report_from_json(const nlohmann::json& j) {
  try {
    ScanReport r;
    r.p = j.at("p").get<std::uint32_t>();
    r.bound = j.at("bound").get<std::uint64_t>();
    r.eligible_count = j.at("eligible_count").get<std::uint64_t>();
    r.triple_count = j.at("triple_count").get<std::uint64_t>();
    r.failures = j.at("failures").get<std::vector<Triple>>();
    const auto& frac = j.at("failure_fraction");
    if (frac.at("numerator").get<std::uint64_t>() != r.failures.size() ||
        frac.at("denominator").get<std::uint64_t>() != r.triple_count) {
      throw InvalidInput("scan report JSON: failure_fraction disagrees with the failure list");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("scan report JSON: ") + e.what());
  }
}

std::string export_report(const ScanReport& report, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::kJson:
      os << to_json(report).dump(2) << '\n';
      break;
    case ReportFormat::kCsv:
      os << "# p=" << report.p << '\n'
         << "# bound=" << report.bound << '\n'
         << "# eligible_count=" << report.eligible_count << '\n'
         << "# triple_count=" << report.triple_count << '\n'
         << "# failure_fraction=" << report.failure_count() << '/' << report.triple_count << " ("
         << decimal(report.failure_fraction()) << ")\n"
         << "q1,q2,q3\n";
      for (const auto& t : report.failures) os << t[0] << ',' << t[1] << ',' << t[2] << '\n';
      break;
    case ReportFormat::kTable:
      os << "p               " << report.p << '\n'
         << "bound           " << report.bound << '\n'
         << "eligible primes " << report.eligible_count << '\n'
         << "triples         " << report.triple_count << '\n'
         << "failures        " << report.failure_count() << '\n'
         << "fraction        " << report.failure_count() << '/' << report.triple_count << " = "
         << decimal(report.failure_fraction()) << '\n';
      for (const auto& t : report.failures) {
        os << "  {" << t[0] << ", " << t[1] << ", " << t[2] << "}\n";
      }
      break;
  }
  return os.str();
}

}  // namespace linkfm
