#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace litrec::logs {

struct DeliveredItem {
  std::string rec_id;
  std::string partner_id;
  int rank = 0;  // 1-based display rank
  std::optional<double> score;
};

struct VariantInfo {
  std::string source;           // title_only | title_and_abstract
  std::vector<int> ngram_combo; // sorted subset of {1,2,3}
  int count = 0;
};

/// One appended row of the delivery log.
struct DeliveryRecord {
  std::string set_id;
  std::string requested_partner_id;
  std::optional<std::string> language;       // of the requested document
  std::string algorithm;
  std::optional<VariantInfo> variant;        // keyphrase arm only
  std::optional<bool> language_filter;       // random arm only
  bool fallback_used = false;
  std::vector<DeliveredItem> items;
  std::string delivered_at;  // ISO-8601 UTC
};

struct ClickRecord {
  std::string rec_id;
  std::string clicked_at;  // ISO-8601 UTC
  bool duplicate = false;  // repeat click on an already-clicked item
};

std::string to_json_line(const DeliveryRecord& record);
std::string to_json_line(const ClickRecord& record);
DeliveryRecord delivery_from_json_line(const std::string& line);
ClickRecord click_from_json_line(const std::string& line);

std::vector<DeliveryRecord> read_delivery_log(const std::string& path);
std::vector<ClickRecord> read_click_log(const std::string& path);

/// Append-only JSONL writer; every append is flushed and fsynced before
/// returning, so an acknowledged row survives a crash.
class AppendLog {
 public:
  explicit AppendLog(const std::string& path);
  ~AppendLog();
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(const std::string& json_line);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  int fd_ = -1;
  std::mutex mutex_;
};

std::string now_iso8601_utc();

}  // namespace litrec::logs
