#include "linkfm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "linkfm/circular.hpp"
#include "linkfm/fmcheck.hpp"
#include "linkfm/lieoracle.hpp"
#include "linkfm/linkdata.hpp"
#include "linkfm/scanstats.hpp"
#include "linkfm/selftest.hpp"

namespace linkfm::cli {

namespace {

struct RunConfig {
  std::string command;
  std::uint32_t p = 0;
  std::vector<std::uint64_t> primes;
  std::uint32_t n = 2;
  std::uint64_t bound = 0;
  std::string format;
  unsigned jobs = 1;
  std::uint64_t budget = 1'000'000'000;
  std::uint64_t seed = kDefaultSeed;
  std::string cache_dir;
  std::size_t cycle = 0;
  std::vector<std::uint32_t> coeffs;
  std::string pattern;
  std::string output;
  std::size_t samples = 500;
  bool with_oracle = false;
};

void log_config(const RunConfig& c, std::ostream& err) {
  std::ostringstream primes;
  for (std::size_t i = 0; i < c.primes.size(); ++i) primes << (i ? "," : "") << c.primes[i];
  err << "linkfm " << c.command << ": p=" << c.p << " primes=[" << primes.str() << "] n=" << c.n
      << " bound=" << c.bound << " format=" << c.format << " jobs=" << c.jobs
      << " budget=" << c.budget << " seed=" << c.seed << " cache-dir=" << c.cache_dir;
  if (c.cycle) err << " cycle=" << c.cycle;
  err << '\n';
}

std::string set_string(const std::vector<std::uint64_t>& qs) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < qs.size(); ++i) os << (i ? ", " : "") << qs[i];
  os << '}';
  return os.str();
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
  for (std::size_t i = 0; i < m.n(); ++i) {
    out << indent << '[';
    for (std::size_t j = 0; j < m.n(); ++j) out << (j ? " " : "") << m(i, j);
    out << "]\n";
  }
}

void print_linking_table(std::ostream& out, const LinkingData& ld) {
  out << "p = " << ld.p << ", S = " << set_string(ld.qs()) << '\n';
  out << "  q          g      c\n";
  for (const auto& r : ld.primes) {
    std::ostringstream row;
    row << "  " << r.q;
    out << row.str() << std::string(std::max<std::size_t>(1, 13 - row.str().size()), ' ') << r.g
        << std::string(std::max<std::size_t>(1, 7 - std::to_string(r.g).size()), ' ') << r.c
        << '\n';
  }
  out << "linking numbers ell[i][j] (diagonal unused):\n";
  print_matrix(out, ld.ell, "  ");
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const auto* a : allowed) {
    if (c.format == a) return;
  }
  throw InvalidInput("format '" + c.format + "' is not supported by " + c.command);
}

LinkingData load_set(const RunConfig& c) {
  if (c.primes.empty()) throw InvalidInput("no primes given");
  return build_linking_data(c.p, c.primes);
}

int cmd_link(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json", "table"});
  const auto ld = load_set(c);
  if (c.format == "json") {
    out << to_json(ld).dump() << '\n';
  } else {
    print_linking_table(out, ld);
  }
  return kExitOk;
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "table"});
  require_odd_prime(c.p);
  if (c.n < 2 || c.n >= c.p) {
    throw InvalidInput("n must satisfy 2 <= n < p, got n=" + std::to_string(c.n));
  }
  const auto ld = load_set(c);
  if (ld.d() > 3) {
    throw InvalidInput("no decision criterion for " + std::to_string(ld.d()) +
                       " primes; use the oracle subcommand");
  }
  FmVerdict verdict;
  nlohmann::ordered_json routes;
  bool agree = true;
  if (ld.d() <= 2) {
    verdict = fm_small(ld);
    routes["small-set"] = true;
  } else {
    verdict = fm3_conditions(ld, c.n);
    const bool fails = fm3_failure_criterion(ld);
    const bool congruence = fm3_congruence_criterion(c.p, ld.qs());
    routes["conditions"] = verdict.holds;
    routes["failure-equalities"] = !fails;
    routes["congruence"] = !congruence;
    agree = (verdict.holds == !fails) && (fails == congruence);
  }
  if (c.with_oracle) {
    SearchOptions so;
    so.budget = c.budget;
    so.jobs = c.jobs;
    const auto res = find_nontrivial_hom(ld.relations(), c.n, so);
    if (res.status == SearchStatus::kInfeasible) {
      routes["oracle"] = "infeasible";
    } else {
      const bool trivial = res.status == SearchStatus::kNone;
      routes["oracle"] = trivial;
      agree = agree && trivial == verdict.holds;
      if (res.witness) verdict.witness = res.witness->mats;
    }
  }

  if (c.format == "json") {
    auto j = to_json(verdict);
    j["routes"] = routes;
    j["agree"] = agree;
    out << j.dump() << '\n';
  } else {
    out << "S = " << set_string(ld.qs()) << ", p = " << c.p << ", n = " << c.n << '\n';
    for (const auto& [name, value] : routes.items()) {
      out << "  " << name << std::string(std::max<std::size_t>(1, 22 - name.size()), ' ')
          << (value.is_boolean() ? (value.get<bool>() ? "holds" : "fails") : value.dump()) << '\n';
    }
    out << "FM(" << c.n << ") " << (verdict.holds ? "holds" : "fails") << " ["
        << to_string(verdict.route) << "]";
    if (!verdict.detail.empty()) {
      out << " indices";
      for (auto i : verdict.detail) out << ' ' << i + 1;
    }
    out << '\n';
    if (verdict.witness) {
      out << "witness:\n";
      for (std::size_t i = 0; i < verdict.witness->size(); ++i) {
        out << "  A" << i + 1 << ":\n";
        print_matrix(out, (*verdict.witness)[i], "    ");
      }
    }
  }
  if (!agree) {
    err << "linkfm check: routes disagree on " << set_string(ld.qs()) << '\n';
    return kExitRouteDisagreement;
  }
  return kExitOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "table"});
  RelationSystem sys;
  std::string label;
  if (c.cycle > 0) {
    if (!c.primes.empty()) throw InvalidInput("--cycle cannot be combined with primes");
    auto coeffs = c.coeffs;
    if (coeffs.empty()) coeffs.assign(2 * c.cycle, 1);
    sys = cycle_system(c.p, c.cycle, coeffs);
    label = "cycle of length " + std::to_string(2 * c.cycle);
  } else {
    const auto ld = load_set(c);
    sys = ld.relations();
    label = "S = " + set_string(ld.qs());
  }
  if (c.n < 1) throw InvalidInput("n must be positive");
  SearchOptions so;
  so.budget = c.budget;
  so.jobs = c.jobs;
  const auto res = find_nontrivial_hom(sys, c.n, so);
  if (res.witness && !check_hom(sys, res.witness->mats)) {
    err << "linkfm oracle: returned witness fails verification\n";
    return kExitRouteDisagreement;
  }
  const char* status = res.status == SearchStatus::kFound  ? "found"
                       : res.status == SearchStatus::kNone ? "none"
                                                           : "infeasible";
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["status"] = status;
    j["candidates"] = res.candidates;
    if (res.witness) j["witness"] = to_json(*res.witness);
    out << j.dump() << '\n';
  } else {
    out << label << ", p = " << c.p << ", n = " << c.n << ": " << status;
    if (res.status != SearchStatus::kInfeasible) out << " (" << res.candidates << " tuples)";
    out << '\n';
    if (res.witness) {
      for (std::size_t i = 0; i < res.witness->mats.size(); ++i) {
        out << "  A" << i + 1 << ":\n";
        print_matrix(out, res.witness->mats[i], "    ");
      }
    }
  }
  if (res.status == SearchStatus::kInfeasible) {
    err << "linkfm oracle: search space exceeds budget " << c.budget << '\n';
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_circular(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "table"});
  const auto ld = load_set(c);
  const auto res = find_circular_ordering(ld);
  if (!res.feasible) {
    err << "linkfm circular: ordering search is limited to " << kMaxCircularSearch << " primes\n";
    return kExitBudget;
  }
  std::vector<std::uint64_t> ordered;
  if (res.perm) {
    for (auto i : *res.perm) ordered.push_back(ld.primes[i].q);
  }
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["circular"] = res.perm.has_value();
    j["ordering"] = ordered;
    out << j.dump() << '\n';
  } else if (res.perm) {
    out << "circular ordering: " << set_string(ordered) << '\n';
  } else {
    out << "no circular ordering of " << set_string(ld.qs()) << '\n';
  }
  return kExitOk;
}

int cmd_extend(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "table"});
  const auto ld = load_set(c);
  if (c.pattern.empty()) throw InvalidInput("--pattern is required");
  std::ifstream in(c.pattern);
  if (!in) throw InvalidInput("cannot read pattern file " + c.pattern);
  nlohmann::json pj;
  try {
    pj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("pattern file: ") + e.what());
  }
  const auto res = extend_with_pattern(ld, pattern_from_json(pj), c.bound);
  if (!res.prime) {
    if (c.format == "json") {
      out << nlohmann::ordered_json{{"found", false}, {"bound", res.bound}}.dump() << '\n';
    } else {
      out << "no eligible prime up to " << res.bound << " realizes the pattern\n";
    }
    err << "linkfm extend: bound " << res.bound << " exhausted\n";
    return kExitBudget;
  }
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["found"] = true;
    j["prime"] = *res.prime;
    j["bound"] = res.bound;
    j["linkdata"] = to_json(*res.extended);
    out << j.dump() << '\n';
  } else {
    out << "new prime: " << *res.prime << '\n';
    print_linking_table(out, *res.extended);
  }
  return kExitOk;
}

int cmd_cover(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_format(c, {"json", "table"});
  const auto ld = load_set(c);
  const auto res = mild_fm_cover(ld, c.bound);
  if (!res.cover) {
    if (c.format == "json") {
      out << nlohmann::ordered_json{{"found", false}, {"bound", res.bound}, {"placed", res.placed}}
                 .dump()
          << '\n';
    } else {
      out << "bound " << res.bound << " exhausted after placing " << res.placed << " of "
          << ld.d() << " new primes\n";
    }
    err << "linkfm cover: bound " << res.bound << " exhausted\n";
    return kExitBudget;
  }
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["found"] = true;
    j["bound"] = res.bound;
    j["linkdata"] = to_json(*res.cover);
    out << j.dump() << '\n';
  } else {
    out << "circular cover (originals at even positions):\n";
    print_linking_table(out, *res.cover);
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const auto format = report_format_from_string(c.format);
  ScanOptions so;
  so.jobs = c.jobs;
  so.cache_dir = c.cache_dir;
  const auto report = scan_triples(c.p, c.bound, so);
  const auto text = export_report(report, format);
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream f(c.output);
    if (!f) throw InvalidInput("cannot write " + c.output);
    f << text;
    out << "wrote " << c.output << '\n';
  }
  return kExitOk;
}

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  require_format(c, {"json", "table"});
  SelftestOptions so;
  so.p = c.p;
  so.seed = c.seed;
  so.samples = c.samples;
  so.budget = c.budget;
  so.jobs = c.jobs;
  if (c.bound) so.triple_bound = c.bound;
  const auto results = run_selftest(so);
  bool ok = true;
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (c.format == "json") {
      j.push_back({{"suite", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    } else {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    }
  }
  if (c.format == "json") out << j.dump() << '\n';
  return ok ? kExitOk : kExitRouteDisagreement;
}

constexpr const char* kEnvPrefix = "LINKFM_";

CLI::Option* env(CLI::Option* opt, const std::string& name) {
  return opt->envname(std::string(kEnvPrefix) + name);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linking numbers of primes and Property FM(n) of their linking algebras",
               "linkfm"};
  app.require_subcommand(1);
  RunConfig cfg;

  struct CommandDef {
    const char* name;
    const char* help;
    bool primes, n, bound, budget, jobs, seed, cache, cycle, pattern;
    const char* default_format;
  };
  const CommandDef commands[] = {
      {"link", "Compute the linking data of a prime set", true, false, false, false, false, false,
       false, false, false, "json"},
      {"check", "Decide Property FM(n) by every applicable criterion", true, true, false, true,
       true, false, false, false, false, "table"},
      {"oracle", "Exhaustively search for a nonzero representation", true, true, false, true,
       true, false, false, true, false, "table"},
      {"circular", "Find a circular ordering of a prime set", true, false, false, false, false,
       false, false, false, false, "table"},
      {"extend", "Extend a set by a prime with prescribed linking numbers", true, false, true,
       false, false, false, false, false, true, "table"},
      {"cover", "Double a set into a circular set", true, false, true, false, false, false, false,
       false, false, "table"},
      {"scan", "Classify all triples of eligible primes up to a bound", false, false, true, false,
       true, false, true, false, false, "table"},
      {"selftest", "Run the executable property suites", false, false, true, true, true, true,
       false, false, false, "table"},
  };

  std::vector<std::pair<CLI::App*, const CommandDef*>> subs;
  for (const auto& s : commands) {
    auto* sub = app.add_subcommand(s.name, s.help);
    subs.emplace_back(sub, &s);
    env(sub->add_option("--p", cfg.p, "Odd prime p")->required(), "P");
    env(sub->add_option("--format", cfg.format, "Output format: table, json or csv"), "FORMAT");
    if (s.primes) sub->add_option("primes", cfg.primes, "Primes q = 1 mod p, q != 1 mod p^2");
    if (s.n) env(sub->add_option("--n", cfg.n, "Representation dimension")->capture_default_str(), "N");
    if (s.bound) {
      auto* b = env(sub->add_option("--bound", cfg.bound, "Search or scan bound"), "BOUND");
      if (std::string(s.name) != "selftest") b->required();
    }
    if (s.budget) {
      env(sub->add_option("--budget", cfg.budget, "Enumeration budget")->capture_default_str(),
          "BUDGET");
    }
    if (s.jobs) env(sub->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str(), "JOBS");
    if (s.seed) {
      env(sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str(), "SEED");
      env(sub->add_option("--samples", cfg.samples, "Samples per randomized check")
              ->capture_default_str(),
          "SAMPLES");
    }
    if (s.cache) {
      env(sub->add_option("--cache-dir", cfg.cache_dir, "Directory for the linking cache"),
          "CACHE_DIR");
      sub->add_option("--output", cfg.output, "Write the report here instead of stdout");
    }
    if (s.cycle) {
      env(sub->add_option("--cycle", cfg.cycle, "Use the cyclic system with 2m generators"),
          "CYCLE");
      sub->add_option("--coeffs", cfg.coeffs, "Coefficients c_1..c_2m for --cycle");
    }
    if (s.pattern) sub->add_option("--pattern", cfg.pattern, "Pattern JSON file")->required();
    if (std::string(s.name) == "check") {
      sub->add_flag("--with-oracle", cfg.with_oracle, "Also run the exhaustive oracle");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "linkfm: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kExitOk : kExitInvalidInput;
  }

  for (const auto& [sub, def] : subs) {
    if (!sub->parsed()) continue;
    cfg.command = def->name;
    if (cfg.format.empty()) cfg.format = def->default_format;
  }
  log_config(cfg, err);

  try {
    require_odd_prime(cfg.p);
    if (cfg.command == "link") return cmd_link(cfg, out);
    if (cfg.command == "check") return cmd_check(cfg, out, err);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out, err);
    if (cfg.command == "circular") return cmd_circular(cfg, out, err);
    if (cfg.command == "extend") return cmd_extend(cfg, out, err);
    if (cfg.command == "cover") return cmd_cover(cfg, out, err);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    if (cfg.command == "selftest") return cmd_selftest(cfg, out);
  } catch (const InvalidInput& e) {
    err << "linkfm " << cfg.command << ": " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const BudgetExceeded& e) {
    err << "linkfm " << cfg.command << ": " << e.what() << '\n';
    return kExitBudget;
  }
  return kExitInvalidInput;
}

}  // namespace linkfm::cli
