#include "litrec/logs.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "litrec/errors.hpp"

namespace litrec::logs {

namespace {

using nlohmann::json;

json variant_to_json(const VariantInfo& v) {
  return json{{"source", v.source}, {"ngram_combo", v.ngram_combo}, {"count", v.count}};
}

VariantInfo variant_from_json(const json& j) {
  VariantInfo v;
  v.source = j.at("source").get<std::string>();
  v.ngram_combo = j.at("ngram_combo").get<std::vector<int>>();
  v.count = j.at("count").get<int>();
  return v;
}

}  // namespace

std::string to_json_line(const DeliveryRecord& record) {
  json j;
  j["set_id"] = record.set_id;
  j["requested_partner_id"] = record.requested_partner_id;
  j["language"] = record.language ? json(*record.language) : json(nullptr);
  j["algorithm"] = record.algorithm;
  j["variant"] = record.variant ? variant_to_json(*record.variant) : json(nullptr);
  if (record.language_filter) j["language_filter"] = *record.language_filter;
  j["fallback_used"] = record.fallback_used;
  json items = json::array();
  for (const DeliveredItem& item : record.items) {
    json row;
    row["rec_id"] = item.rec_id;
    row["partner_id"] = item.partner_id;
    row["rank"] = item.rank;
    row["score"] = item.score ? json(*item.score) : json(nullptr);
    items.push_back(std::move(row));
  }
  j["items"] = std::move(items);
  j["delivered_at"] = record.delivered_at;
  return j.dump();
}

std::string to_json_line(const ClickRecord& record) {
  json j;
  j["rec_id"] = record.rec_id;
  j["clicked_at"] = record.clicked_at;
  j["duplicate"] = record.duplicate;
  return j.dump();
}

DeliveryRecord delivery_from_json_line(const std::string& line) {
  json j = json::parse(line);
  DeliveryRecord r;
  r.set_id = j.at("set_id").get<std::string>();
  r.requested_partner_id = j.at("requested_partner_id").get<std::string>();
  if (j.contains("language") && !j.at("language").is_null()) {
    r.language = j.at("language").get<std::string>();
  }
  r.algorithm = j.at("algorithm").get<std::string>();
  if (j.contains("variant") && !j.at("variant").is_null()) {
    r.variant = variant_from_json(j.at("variant"));
  }
  if (j.contains("language_filter") && !j.at("language_filter").is_null()) {
    r.language_filter = j.at("language_filter").get<bool>();
  }
  r.fallback_used = j.at("fallback_used").get<bool>();
  for (const auto& row : j.at("items")) {
    DeliveredItem item;
    item.rec_id = row.at("rec_id").get<std::string>();
    item.partner_id = row.at("partner_id").get<std::string>();
    item.rank = row.at("rank").get<int>();
    if (row.contains("score") && !row.at("score").is_null()) {
      item.score = row.at("score").get<double>();
    }
    r.items.push_back(std::move(item));
  }
  r.delivered_at = j.at("delivered_at").get<std::string>();
  return r;
}

ClickRecord click_from_json_line(const std::string& line) {
  json j = json::parse(line);
  ClickRecord r;
  r.rec_id = j.at("rec_id").get<std::string>();
  r.clicked_at = j.at("clicked_at").get<std::string>();
  r.duplicate = j.at("duplicate").get<bool>();
  return r;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  if (!in) return lines;  // a missing log is an empty log
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<DeliveryRecord> read_delivery_log(const std::string& path) {
  std::vector<DeliveryRecord> records;
  for (const auto& line : read_lines(path)) {
    try {
      records.push_back(delivery_from_json_line(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("delivery log " + path + ": " + e.what(), 0);
    }
  }
  return records;
}

std::vector<ClickRecord> read_click_log(const std::string& path) {
  std::vector<ClickRecord> records;
  for (const auto& line : read_lines(path)) {
    try {
      records.push_back(click_from_json_line(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("click log " + path + ": " + e.what(), 0);
    }
  }
  return records;
}

AppendLog::AppendLog(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd_ < 0) throw InvalidArgumentError("cannot open log for append: " + path);
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendLog::append(const std::string& json_line) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::string line = json_line;
  line.push_back('\n');
  const char* data = line.data();
  std::size_t remaining = line.size();
  while (remaining > 0) {
    ssize_t written = ::write(fd_, data, remaining);
    if (written < 0) throw Error("log append failed: " + path_);
    data += written;
    remaining -= static_cast<std::size_t>(written);
  }
  if (::fsync(fd_) != 0) throw Error("log fsync failed: " + path_);
}

std::string now_iso8601_utc() {
  using namespace std::chrono;
  auto now = system_clock::now();
  std::time_t secs = system_clock::to_time_t(now);
  auto millis = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(millis.count()));
  return buf;
}

}  // namespace litrec::logs
