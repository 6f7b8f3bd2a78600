#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "litrec/logs.hpp"
#include "litrec/recsys.hpp"

namespace httplib {
class Server;
}

namespace litrec::service {

struct HttpResult {
  int status = 200;
  std::string content_type = "application/xml";
  std::string body;
  std::optional<std::string> location;  // 302 responses
};

struct ServiceOptions {
  std::string delivery_log_path;
  std::string click_log_path;
  std::string landing_url_template = "https://partner.example/document/{partner_id}";
  std::string base_url;    // prefix of generated click URLs
  std::uint64_t seed = 1;  // request-routing RNG seed
};

/// HTTP-facing recommender: resolves partner ids, routes each request
/// through the experiment chooser, logs the delivery before responding,
/// and tracks clicks. Logs are append-only JSONL with fsync on append.
class RecommenderService {
 public:
  RecommenderService(const recsys::Engines* engines, ServiceOptions options);

  /// GET /v1/documents/{partner_doc_id}/related_documents
  HttpResult handle_related_documents(const std::string& partner_doc_id);

  /// GET /v1/recommendations/{rec_id}/click
  HttpResult handle_click(const std::string& rec_id);

  /// Copies log rows whose timestamp falls in [from, to] (inclusive,
  /// missing bound = unbounded) to the output paths, byte for byte.
  void export_logs(const std::optional<std::string>& from,
                   const std::optional<std::string>& to,
                   const std::string& deliveries_out,
                   const std::string& clicks_out) const;

  const ServiceOptions& options() const { return options_; }

 private:
  std::string next_set_id();

  const recsys::Engines* engines_;
  ServiceOptions options_;
  logs::AppendLog delivery_log_;
  logs::AppendLog click_log_;
  recsys::Rng rng_;
  std::uint64_t set_counter_ = 0;
  std::map<std::string, std::string> rec_to_partner_;  // delivered rec ids
  std::set<std::string> clicked_;                      // counted clicks
  std::mutex mutex_;
};

std::string render_error_xml(int code, const std::string& message);

/// Registers the two GET routes on an httplib server.
void attach_routes(httplib::Server& server, RecommenderService& service);

/// Blocks serving HTTP until the process exits.
int run_http_server(RecommenderService& service, const std::string& host, int port);

}  // namespace litrec::service
