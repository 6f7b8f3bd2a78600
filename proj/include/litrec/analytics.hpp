#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "litrec/logs.hpp"

namespace litrec::analytics {

/// CTR for one group of delivered recommendation items. The denominator
/// counts items (a full set of 6 counts as 6); the numerator counts
/// deduplicated clicks that join to those items.
struct CtrReport {
  std::string key;
  std::int64_t delivered = 0;
  std::int64_t clicks = 0;
  std::optional<double> ctr;  // null when nothing was delivered
};

enum class Dimension {
  algorithm,
  algorithm_detail,  // splits random by language filter
  language,
  ngram,
  kpcount,
  source,
  fallback,
};

std::string dimension_name(Dimension d);
std::optional<Dimension> dimension_from_name(std::string_view name);

struct Logs {
  std::vector<logs::DeliveryRecord> deliveries;
  std::vector<logs::ClickRecord> clicks;

  static Logs load(const std::string& deliveries_path, const std::string& clicks_path);
};

/// Throws ContractViolationError listing every click whose rec_id joins
/// to no delivered item.
void check_referential_integrity(const Logs& logs);

struct Filter {
  std::optional<std::string> algorithm;
  std::optional<std::string> language;  // "unspecified" matches absent
  std::optional<bool> fallback_used;
};

CtrReport compute_ctr(const Logs& logs, const Filter& filter = {});

/// Partition of the dimension's matching items; group delivered counts
/// sum to the matching total. Rows sorted by key.
std::vector<CtrReport> group_ctr(const Logs& logs, Dimension dimension);

/// Buckets: 1-2, 3-5, 6-8, 9-13, 14+.
std::string bucket_keyphrase_count(int count);

struct SignificanceResult {
  double z = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p < 0.05
};

/// Two-proportion pooled z-test, two-sided.
SignificanceResult significance(std::int64_t clicks_a, std::int64_t delivered_a,
                                std::int64_t clicks_b, std::int64_t delivered_b);

struct ReportSpec {
  Dimension dimension = Dimension::algorithm;
  std::vector<std::pair<std::string, std::string>> tests;  // pairs of group keys
};

struct Report {
  std::string table;      // human-readable
  std::string csv;        // machine-readable rows (tests appended)
  std::string plot_data;  // group,ctr,delivered
  std::vector<CtrReport> rows;
  std::vector<std::pair<std::string, SignificanceResult>> test_results;
};

/// Deterministic: identical logs and spec produce byte-identical output.
Report run_report(const Logs& logs, const ReportSpec& spec);

}  // namespace litrec::analytics
