#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkfm/linkdata.hpp"

namespace linkfm {

using Triple = std::array<std::uint64_t, 3>;

struct ScanReport {
  std::uint32_t p = 0;
  std::uint64_t bound = 0;
  std::uint64_t eligible_count = 0;
  std::uint64_t triple_count = 0;
  std::vector<Triple> failures;  ///< ascending within and across triples

  std::uint64_t failure_count() const { return failures.size(); }
  double failure_fraction() const {
    return triple_count == 0 ? 0.0
                             : static_cast<double>(failures.size()) / static_cast<double>(triple_count);
  }

  bool operator==(const ScanReport&) const = default;
};

struct ScanOptions {
  unsigned jobs = 1;
  std::uint64_t max_eligible = 5000;
  /// Directory for the pairwise linking cache; empty disables caching.
  std::filesystem::path cache_dir;
};

/// Classifies every 3-subset of the eligible primes <= bound by the failure
/// equalities, using a pairwise linking matrix computed (or loaded) once.
ScanReport scan_triples(std::uint32_t p, std::uint64_t bound, const ScanOptions& opts = {});

/// Same classification over an already assembled pairwise matrix.
ScanReport scan_linking_data(const LinkingData& all, std::uint64_t bound, unsigned jobs);

/// Cache file for the linking data of all eligible primes <= bound.
std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint32_t p,
                                 std::uint64_t bound);

enum class ReportFormat { kJson, kCsv, kTable };
ReportFormat report_format_from_string(const std::string& s);

/// Serializes with a stable field order. CSV is a '#'-prefixed header block,
/// the column line q1,q2,q3, then one row per failing triple.
std::string export_report(const ScanReport& report, ReportFormat format);

nlohmann::ordered_json to_json(const ScanReport& report);
ScanReport scan_report_from_json(const nlohmann::json& j);

}  // namespace linkfm
