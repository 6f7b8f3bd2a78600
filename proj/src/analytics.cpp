#include "litrec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "litrec/errors.hpp"

namespace litrec::analytics {

namespace {

std::string format_ctr(const std::optional<double>& ctr) {
  if (!ctr) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", *ctr);
  return buf;
}

std::string combo_label(const std::vector<int>& combo) {
  std::string out;
  for (std::size_t i = 0; i < combo.size(); ++i) {
    if (i > 0) out.push_back('+');
    out += std::to_string(combo[i]);
  }
  return out;
}

/// Group key of a delivery record under a dimension; nullopt when the
/// record is outside the dimension's domain (e.g. no variant for ngram).
std::optional<std::string> group_key(const logs::DeliveryRecord& r, Dimension d) {
  switch (d) {
    case Dimension::algorithm:
      return r.algorithm;
    case Dimension::algorithm_detail:
      if (r.algorithm == "random") {
        return r.language_filter.value_or(false) ? std::string("random_filtered")
                                                 : std::string("random_unfiltered");
      }
      return r.algorithm;
    case Dimension::language:
      return r.language.value_or("unspecified");
    case Dimension::ngram:
      if (!r.variant) return std::nullopt;
      return combo_label(r.variant->ngram_combo);
    case Dimension::kpcount:
      if (!r.variant) return std::nullopt;
      return bucket_keyphrase_count(r.variant->count);
    case Dimension::source:
      if (!r.variant) return std::nullopt;
      return r.variant->source;
    case Dimension::fallback:
      return r.fallback_used ? std::string("fallback") : std::string("direct");
  }
  return std::nullopt;
}

/// rec_id -> deduplicated click count (0 or 1) for joining.
std::unordered_set<std::string> counted_clicks(const Logs& logs) {
  std::unordered_set<std::string> counted;
  for (const auto& click : logs.clicks) {
    if (!click.duplicate) counted.insert(click.rec_id);
  }
  return counted;
}

}  // namespace

std::string dimension_name(Dimension d) {
  switch (d) {
    case Dimension::algorithm: return "algorithm";
    case Dimension::algorithm_detail: return "algorithm_detail";
    case Dimension::language: return "language";
    case Dimension::ngram: return "ngram";
    case Dimension::kpcount: return "kpcount";
    case Dimension::source: return "source";
    case Dimension::fallback: return "fallback";
  }
  return "unknown";
}

std::optional<Dimension> dimension_from_name(std::string_view name) {
  for (Dimension d : {Dimension::algorithm, Dimension::algorithm_detail,
                      Dimension::language, Dimension::ngram, Dimension::kpcount,
                      Dimension::source, Dimension::fallback}) {
    if (dimension_name(d) == name) return d;
  }
  return std::nullopt;
}

Logs Logs::load(const std::string& deliveries_path, const std::string& clicks_path) {
  Logs logs;
  logs.deliveries = logs::read_delivery_log(deliveries_path);
  logs.clicks = logs::read_click_log(clicks_path);
  return logs;
}

void check_referential_integrity(const Logs& logs) {
  std::unordered_set<std::string> known;
  for (const auto& record : logs.deliveries) {
    for (const auto& item : record.items) known.insert(item.rec_id);
  }
  std::set<std::string> orphans;
  for (const auto& click : logs.clicks) {
    if (known.count(click.rec_id) == 0) orphans.insert(click.rec_id);
  }
  if (!orphans.empty()) {
    std::string msg = "click log references unknown rec_ids:";
    for (const auto& id : orphans) msg += " " + id;
    throw ContractViolationError(msg);
  }
}

CtrReport compute_ctr(const Logs& logs, const Filter& filter) {
  check_referential_integrity(logs);
  auto clicked = counted_clicks(logs);

  CtrReport report;
  report.key = "all";
  for (const auto& record : logs.deliveries) {
    if (filter.algorithm && record.algorithm != *filter.algorithm) continue;
    if (filter.language && record.language.value_or("unspecified") != *filter.language) {
      continue;
    }
    if (filter.fallback_used && record.fallback_used != *filter.fallback_used) continue;
    report.delivered += static_cast<std::int64_t>(record.items.size());
    for (const auto& item : record.items) {
      if (clicked.count(item.rec_id)) ++report.clicks;
    }
  }
  if (report.delivered > 0) {
    report.ctr = static_cast<double>(report.clicks) /
                 static_cast<double>(report.delivered);
  }
  return report;
}

std::vector<CtrReport> group_ctr(const Logs& logs, Dimension dimension) {
  check_referential_integrity(logs);
  auto clicked = counted_clicks(logs);

  std::map<std::string, CtrReport> groups;
  for (const auto& record : logs.deliveries) {
    auto key = group_key(record, dimension);
    if (!key) continue;
    CtrReport& g = groups[*key];
    g.key = *key;
    g.delivered += static_cast<std::int64_t>(record.items.size());
    for (const auto& item : record.items) {
      if (clicked.count(item.rec_id)) ++g.clicks;
    }
  }
  std::vector<CtrReport> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) {
    if (g.delivered > 0) {
      g.ctr = static_cast<double>(g.clicks) / static_cast<double>(g.delivered);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::string bucket_keyphrase_count(int count) {
  if (count < 1) throw InvalidArgumentError("keyphrase count must be >= 1");
  if (count <= 2) return "1-2";
  if (count <= 5) return "3-5";
  if (count <= 8) return "6-8";
  if (count <= 13) return "9-13";
  return "14+";
}

SignificanceResult significance(std::int64_t clicks_a, std::int64_t delivered_a,
                                std::int64_t clicks_b, std::int64_t delivered_b) {
  if (delivered_a <= 0 || delivered_b <= 0) {
    throw InvalidArgumentError("significance requires deliveries on both sides");
  }
  if (clicks_a < 0 || clicks_b < 0 || clicks_a > delivered_a || clicks_b > delivered_b) {
    throw InvalidArgumentError("clicks must lie in [0, delivered]");
  }
  double p1 = static_cast<double>(clicks_a) / static_cast<double>(delivered_a);
  double p2 = static_cast<double>(clicks_b) / static_cast<double>(delivered_b);
  double pooled = static_cast<double>(clicks_a + clicks_b) /
                  static_cast<double>(delivered_a + delivered_b);
  double variance = pooled * (1.0 - pooled) *
                    (1.0 / static_cast<double>(delivered_a) +
                     1.0 / static_cast<double>(delivered_b));
  SignificanceResult result;
  if (variance > 0.0) {
    result.z = (p1 - p2) / std::sqrt(variance);
  } else {
    result.z = 0.0;  // both proportions are 0 or 1: no evidence either way
  }
  result.p_value = std::erfc(std::abs(result.z) / std::sqrt(2.0));
  result.significant = result.p_value < 0.05;
  return result;
}

Report run_report(const Logs& logs, const ReportSpec& spec) {
  Report report;
  report.rows = group_ctr(logs, spec.dimension);

  for (const auto& [a, b] : spec.tests) {
    const CtrReport* ga = nullptr;
    const CtrReport* gb = nullptr;
    for (const auto& row : report.rows) {
      if (row.key == a) ga = &row;
      if (row.key == b) gb = &row;
    }
    if (!ga || !gb) {
      throw InvalidArgumentError("test group not present in report: " +
                                 (ga ? b : a));
    }
    report.test_results.emplace_back(
        a + " vs " + b,
        significance(ga->clicks, ga->delivered, gb->clicks, gb->delivered));
  }

  std::string dim = dimension_name(spec.dimension);

  std::ostringstream csv;
  csv << dim << ",delivered,clicks,ctr\n";
  for (const auto& row : report.rows) {
    csv << row.key << ',' << row.delivered << ',' << row.clicks << ','
        << format_ctr(row.ctr) << '\n';
  }
  for (const auto& [label, r] : report.test_results) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%s", r.z, r.p_value,
                  r.significant ? "true" : "false");
    csv << "test," << label << ',' << buf << '\n';
  }
  report.csv = csv.str();

  std::ostringstream plot;
  plot << "group,ctr,delivered\n";
  for (const auto& row : report.rows) {
    plot << row.key << ',' << format_ctr(row.ctr) << ',' << row.delivered << '\n';
  }
  report.plot_data = plot.str();

  std::size_t key_width = dim.size();
  for (const auto& row : report.rows) key_width = std::max(key_width, row.key.size());
  std::ostringstream table;
  table << dim << std::string(key_width - dim.size(), ' ')
        << "  delivered    clicks       ctr\n"
        << std::string(key_width + 32, '-') << "\n";
  for (const auto& row : report.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-*s %10lld %9lld  %8.6f\n",
                  static_cast<int>(key_width), row.key.c_str(),
                  static_cast<long long>(row.delivered),
                  static_cast<long long>(row.clicks), row.ctr.value_or(0.0));
    table << line;
  }
  for (const auto& [label, r] : report.test_results) {
    char line[160];
    std::snprintf(line, sizeof(line), "test %s: z=%.4f p=%.6f %s\n", label.c_str(),
                  r.z, r.p_value,
                  r.significant ? "significant" : "not significant");
    table << line;
  }
  report.table = table.str();
  return report;
}

}  // namespace litrec::analytics
