#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "litrec/analytics.hpp"
#include "litrec/errors.hpp"

using namespace litrec;
using namespace litrec::analytics;

namespace {

int g_set_seq = 0;

logs::DeliveryRecord make_delivery(const std::string& algorithm, int items,
                                   const char* language = "en",
                                   std::optional<logs::VariantInfo> variant = {},
                                   std::optional<bool> filter = {},
                                   bool fallback = false) {
  logs::DeliveryRecord r;
  r.set_id = "s" + std::to_string(++g_set_seq);
  r.requested_partner_id = "P" + std::to_string(g_set_seq);
  if (language) r.language = language;
  r.algorithm = algorithm;
  r.variant = std::move(variant);
  r.language_filter = filter;
  r.fallback_used = fallback;
  for (int i = 1; i <= items; ++i) {
    r.items.push_back({r.set_id + "-r" + std::to_string(i),
                       "T" + std::to_string(i), i, std::nullopt});
  }
  r.delivered_at = "2026-01-01T00:00:00.000Z";
  return r;
}

logs::ClickRecord make_click(const std::string& rec_id, bool duplicate = false) {
  return {rec_id, "2026-01-01T00:00:01.000Z", duplicate};
}

/// `total` items across sets of six, `clicks` unique clicks, for one arm.
void plant(Logs& logs, const std::string& algorithm, int total, int clicks,
           std::optional<bool> filter = {}) {
  int clicked = 0;
  while (total > 0) {
    int size = std::min(total, 6);
    auto record = make_delivery(algorithm, size, "en", {}, filter);
    total -= size;
    for (int i = 0; i < size && clicked < clicks; ++i, ++clicked) {
      logs.clicks.push_back(make_click(record.items[i].rec_id));
    }
    logs.deliveries.push_back(std::move(record));
  }
}

}  // namespace

TEST_CASE("compute_ctr: no deliveries means null ctr") {
  Logs logs;
  auto report = compute_ctr(logs);
  CHECK(report.delivered == 0);
  CHECK(!report.ctr.has_value());
}

TEST_CASE("compute_ctr: 21 unique clicks on 10000 items is exactly 0.21%") {
  Logs logs;
  plant(logs, "mlt", 10000, 21);
  // three duplicate clicks must not change the numerator
  logs.clicks.push_back(make_click(logs.deliveries[0].items[0].rec_id, true));
  logs.clicks.push_back(make_click(logs.deliveries[0].items[1].rec_id, true));
  logs.clicks.push_back(make_click(logs.deliveries[0].items[2].rec_id, true));

  auto report = compute_ctr(logs);
  CHECK(report.delivered == 10000);
  CHECK(report.clicks == 21);
  REQUIRE(report.ctr.has_value());
  CHECK(*report.ctr == 21.0 / 10000.0);
  CHECK(*report.ctr == doctest::Approx(0.0021));
}

TEST_CASE("compute_ctr: planted per-algorithm rates recovered exactly") {
  Logs logs;
  plant(logs, "mlt", 100000, 229);
  plant(logs, "keyphrase", 100000, 148);
  auto rows = group_ctr(logs, Dimension::algorithm);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    if (row.key == "mlt") CHECK(*row.ctr == 229.0 / 100000.0);
    if (row.key == "keyphrase") CHECK(*row.ctr == 148.0 / 100000.0);
  }
}

TEST_CASE("orphan clicks are a hard error listing the rec ids") {
  Logs logs;
  plant(logs, "mlt", 6, 1);
  logs.clicks.push_back(make_click("sX-r9"));
  try {
    compute_ctr(logs);
    FAIL("expected ContractViolationError");
  } catch (const ContractViolationError& e) {
    CHECK(std::string(e.what()).find("sX-r9") != std::string::npos);
  }
}

TEST_CASE("group_ctr: one algorithm, one row") {
  Logs logs;
  plant(logs, "stereotype", 18, 2);
  auto rows = group_ctr(logs, Dimension::algorithm);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].key == "stereotype");
  CHECK(rows[0].delivered == 18);
  CHECK(rows[0].clicks == 2);
}

TEST_CASE("group_ctr: language groups partition the total") {
  Logs logs;
  logs.deliveries.push_back(make_delivery("mlt", 6, "en"));
  logs.deliveries.push_back(make_delivery("mlt", 6, "de"));
  logs.deliveries.push_back(make_delivery("mlt", 4, nullptr));
  logs.clicks.push_back(make_click(logs.deliveries[0].items[0].rec_id));
  logs.clicks.push_back(make_click(logs.deliveries[2].items[1].rec_id));

  auto rows = group_ctr(logs, Dimension::language);
  REQUIRE(rows.size() == 3);
  std::int64_t delivered = 0, clicks = 0;
  bool saw_unspecified = false;
  for (const auto& row : rows) {
    delivered += row.delivered;
    clicks += row.clicks;
    saw_unspecified |= row.key == "unspecified";
  }
  CHECK(saw_unspecified);
  CHECK(delivered == 16);
  CHECK(clicks == 2);
}

TEST_CASE("group_ctr: ngram keys are exactly the sampled combos") {
  Logs logs;
  std::vector<std::vector<int>> combos = {{1},    {2},    {3},      {1, 2},
                                          {1, 3}, {2, 3}, {1, 2, 3}};
  for (const auto& combo : combos) {
    logs.deliveries.push_back(make_delivery(
        "keyphrase", 6, "en", logs::VariantInfo{"title_only", combo, 5}));
  }
  logs.deliveries.push_back(make_delivery("mlt", 6));  // outside the dimension
  auto rows = group_ctr(logs, Dimension::ngram);
  REQUIRE(rows.size() == 7);
  std::set<std::string> keys;
  for (const auto& row : rows) keys.insert(row.key);
  CHECK(keys == std::set<std::string>{"1", "2", "3", "1+2", "1+3", "2+3", "1+2+3"});
  std::int64_t total = 0;
  for (const auto& row : rows) total += row.delivered;
  CHECK(total == 42);  // the mlt set is not part of the ngram partition
}

TEST_CASE("group_ctr: source and kpcount partitions") {
  Logs logs;
  logs.deliveries.push_back(
      make_delivery("keyphrase", 6, "en", logs::VariantInfo{"title_only", {1}, 2}));
  logs.deliveries.push_back(make_delivery(
      "keyphrase", 6, "en", logs::VariantInfo{"title_and_abstract", {1}, 9}));
  logs.deliveries.push_back(make_delivery(
      "keyphrase", 6, "en", logs::VariantInfo{"title_and_abstract", {1}, 19}));

  auto by_source = group_ctr(logs, Dimension::source);
  REQUIRE(by_source.size() == 2);
  for (const auto& row : by_source) {
    if (row.key == "title_only") CHECK(row.delivered == 6);
    if (row.key == "title_and_abstract") CHECK(row.delivered == 12);
  }

  auto by_count = group_ctr(logs, Dimension::kpcount);
  std::set<std::string> keys;
  for (const auto& row : by_count) keys.insert(row.key);
  CHECK(keys == std::set<std::string>{"1-2", "9-13", "14+"});
}

TEST_CASE("group_ctr: fallback dimension separates the populations") {
  Logs logs;
  logs.deliveries.push_back(make_delivery(
      "keyphrase", 6, "en", logs::VariantInfo{"title_only", {1}, 3}, {}, true));
  logs.deliveries.push_back(make_delivery(
      "keyphrase", 6, "en", logs::VariantInfo{"title_only", {1}, 3}, {}, false));
  auto rows = group_ctr(logs, Dimension::fallback);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.delivered == 6);
  }
}

TEST_CASE("group_ctr: algorithm_detail splits random by filter") {
  Logs logs;
  plant(logs, "random", 12, 1, true);
  plant(logs, "random", 12, 2, false);
  plant(logs, "mlt", 6, 1);
  auto rows = group_ctr(logs, Dimension::algorithm_detail);
  std::map<std::string, std::int64_t> delivered;
  for (const auto& row : rows) delivered[row.key] = row.delivered;
  CHECK(delivered.at("random_filtered") == 12);
  CHECK(delivered.at("random_unfiltered") == 12);
  CHECK(delivered.at("mlt") == 6);
}

TEST_CASE("bucket_keyphrase_count: documented edges") {
  CHECK(bucket_keyphrase_count(1) == "1-2");
  CHECK(bucket_keyphrase_count(2) == "1-2");
  CHECK(bucket_keyphrase_count(3) == "3-5");
  CHECK(bucket_keyphrase_count(5) == "3-5");
  CHECK(bucket_keyphrase_count(6) == "6-8");
  CHECK(bucket_keyphrase_count(8) == "6-8");
  CHECK(bucket_keyphrase_count(9) == "9-13");
  CHECK(bucket_keyphrase_count(13) == "9-13");
  CHECK(bucket_keyphrase_count(14) == "14+");
  CHECK(bucket_keyphrase_count(19) == "14+");
  CHECK_THROWS_AS(bucket_keyphrase_count(0), InvalidArgumentError);
}

TEST_CASE("significance: identical proportions give z=0, p=1") {
  auto r = significance(50, 10000, 50, 10000);
  CHECK(r.z == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(!r.significant);
}

TEST_CASE("significance: 100/10000 vs 50/10000 is significant, z near 4.1") {
  auto r = significance(100, 10000, 50, 10000);
  CHECK(r.z == doctest::Approx(4.098).epsilon(0.01));
  CHECK(r.p_value < 0.05);
  CHECK(r.significant);
}

TEST_CASE("significance: 51/10000 vs 50/10000 is not significant, z near 0.1") {
  auto r = significance(51, 10000, 50, 10000);
  CHECK(r.z == doctest::Approx(0.0998).epsilon(0.02));
  CHECK(!r.significant);
}

TEST_CASE("significance: swapping arms negates z and keeps p") {
  auto a = significance(80, 9000, 50, 11000);
  auto b = significance(50, 11000, 80, 9000);
  CHECK(a.z == doctest::Approx(-b.z));
  CHECK(a.p_value == doctest::Approx(b.p_value));
  CHECK(a.significant == b.significant);
}

TEST_CASE("significance: zero deliveries and bad counts are errors") {
  CHECK_THROWS_AS(significance(0, 0, 1, 10), InvalidArgumentError);
  CHECK_THROWS_AS(significance(5, 4, 1, 10), InvalidArgumentError);
}

TEST_CASE("significance flag agrees with the p-value at the 0.05 line") {
  for (int clicks = 50; clicks <= 120; clicks += 7) {
    auto r = significance(clicks, 10000, 50, 10000);
    CHECK(r.significant == (r.p_value < 0.05));
  }
}

TEST_CASE("partition property holds for every dimension") {
  Logs logs;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<int> lang(0, 2);
  std::uniform_int_distribution<int> arm(0, 4);
  std::uniform_int_distribution<int> count(1, 19);
  const char* languages[] = {"en", "de", nullptr};
  const char* arms[] = {"random", "mlt", "stereotype", "most_popular", "keyphrase"};
  for (int i = 0; i < 300; ++i) {
    std::string algorithm = arms[arm(rng)];
    std::optional<logs::VariantInfo> variant;
    std::optional<bool> filter;
    if (algorithm == "keyphrase") {
      variant = logs::VariantInfo{"title_only", {1, 3}, count(rng)};
    }
    if (algorithm == "random") filter = (i % 2) == 0;
    auto record = make_delivery(algorithm, size(rng), languages[lang(rng)],
                                variant, filter, false);
    if (i % 7 == 0 && !record.items.empty()) {
      logs.clicks.push_back(make_click(record.items[0].rec_id));
    }
    logs.deliveries.push_back(std::move(record));
  }

  auto total = compute_ctr(logs);
  for (auto dimension : {Dimension::algorithm, Dimension::algorithm_detail,
                         Dimension::language, Dimension::fallback}) {
    auto rows = group_ctr(logs, dimension);
    std::int64_t delivered = 0, clicks = 0;
    for (const auto& row : rows) {
      delivered += row.delivered;
      clicks += row.clicks;
    }
    CHECK(delivered == total.delivered);
    CHECK(clicks == total.clicks);
  }
  // variant dimensions partition the keyphrase-arm subset
  auto kp_total = compute_ctr(logs, Filter{.algorithm = "keyphrase"});
  for (auto dimension : {Dimension::ngram, Dimension::kpcount, Dimension::source}) {
    auto rows = group_ctr(logs, dimension);
    std::int64_t delivered = 0, clicks = 0;
    for (const auto& row : rows) {
      delivered += row.delivered;
      clicks += row.clicks;
    }
    CHECK(delivered == kp_total.delivered);
    CHECK(clicks == kp_total.clicks);
  }
}

TEST_CASE("planted-ctr recovery within 3 binomial standard errors") {
  std::mt19937_64 rng(99);
  struct Arm {
    const char* name;
    double p;
    int sets;
  };
  for (const Arm& arm : {Arm{"mlt", 0.01, 2000}, Arm{"keyphrase", 0.003, 2000}}) {
    Logs logs;
    std::bernoulli_distribution flip(arm.p);
    for (int i = 0; i < arm.sets; ++i) {
      auto record = make_delivery(arm.name, 6);
      for (const auto& item : record.items) {
        if (flip(rng)) logs.clicks.push_back(make_click(item.rec_id));
      }
      logs.deliveries.push_back(std::move(record));
    }
    auto report = compute_ctr(logs);
    double n = static_cast<double>(report.delivered);
    double tolerance = 3.0 * std::sqrt(arm.p * (1.0 - arm.p) / n);
    REQUIRE(report.ctr.has_value());
    CHECK(std::abs(*report.ctr - arm.p) < tolerance);
  }
}

TEST_CASE("report: empty logs give a header-only csv") {
  Logs logs;
  auto report = run_report(logs, {Dimension::algorithm, {}});
  CHECK(report.csv == "algorithm,delivered,clicks,ctr\n");
  CHECK(report.rows.empty());
}

TEST_CASE("report: five algorithm rows on a planted log, deterministic bytes") {
  Logs logs;
  plant(logs, "random", 60, 1);
  plant(logs, "mlt", 60, 2);
  plant(logs, "stereotype", 60, 1);
  plant(logs, "most_popular", 60, 0);
  plant(logs, "keyphrase", 60, 1);

  ReportSpec spec{Dimension::algorithm, {{"mlt", "random"}}};
  auto a = run_report(logs, spec);
  auto b = run_report(logs, spec);
  CHECK(a.rows.size() == 5);
  CHECK(a.csv == b.csv);
  CHECK(a.table == b.table);
  CHECK(a.plot_data == b.plot_data);
  REQUIRE(a.test_results.size() == 1);
  CHECK(a.test_results[0].first == "mlt vs random");
  CHECK(a.csv.find("test,mlt vs random,") != std::string::npos);
}

TEST_CASE("report: unknown test group is a usage error") {
  Logs logs;
  plant(logs, "mlt", 6, 0);
  CHECK_THROWS_AS(run_report(logs, {Dimension::algorithm, {{"mlt", "ghost"}}}),
                  InvalidArgumentError);
}

TEST_CASE("dimension names round-trip") {
  for (auto d : {Dimension::algorithm, Dimension::algorithm_detail,
                 Dimension::language, Dimension::ngram, Dimension::kpcount,
                 Dimension::source, Dimension::fallback}) {
    auto parsed = dimension_from_name(dimension_name(d));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == d);
  }
  CHECK(!dimension_from_name("bogus").has_value());
}
