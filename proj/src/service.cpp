#include "litrec/service.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "litrec/errors.hpp"
#include "litrec/xml.hpp"

namespace litrec::service {

namespace {

std::string replace_placeholder(std::string templ, const std::string& placeholder,
                                const std::string& value) {
  auto pos = templ.find(placeholder);
  while (pos != std::string::npos) {
    templ.replace(pos, placeholder.size(), value);
    pos = templ.find(placeholder, pos + value.size());
  }
  return templ;
}

std::string join_authors(const std::vector<std::string>& authors) {
  std::string out;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    if (i > 0) out += "; ";
    out += authors[i];
  }
  return out;
}

std::string render_related_articles_xml(
    const std::string& set_id, const corpus::DocumentStore& store,
    const std::vector<logs::DeliveredItem>& items, const std::string& base_url) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<related_articles set_id=\"" << xml::escape(set_id) << "\">\n";
  for (const logs::DeliveredItem& item : items) {
    const corpus::Document* doc = store.find_by_partner_id(item.partner_id);
    out << "  <related_document rank=\"" << item.rank << "\" rec_id=\""
        << xml::escape(item.rec_id) << "\">\n";
    out << "    <title>" << xml::escape(doc ? doc->title : "") << "</title>\n";
    out << "    <authors>" << xml::escape(doc ? join_authors(doc->authors) : "")
        << "</authors>\n";
    out << "    <published_in>"
        << xml::escape(doc && doc->published_in ? *doc->published_in : "")
        << "</published_in>\n";
    out << "    <year>" << (doc && doc->year ? std::to_string(*doc->year) : "")
        << "</year>\n";
    out << "    <click_url>"
        << xml::escape(base_url + "/v1/recommendations/" + item.rec_id + "/click")
        << "</click_url>\n";
    out << "  </related_document>\n";
  }
  out << "</related_articles>\n";
  return out.str();
}

}  // namespace

std::string render_error_xml(int code, const std::string& message) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<error code=\"" << code << "\" message=\"" << xml::escape(message)
      << "\"/>\n";
  return out.str();
}

RecommenderService::RecommenderService(const recsys::Engines* engines,
                                       ServiceOptions options)
    : engines_(engines),
      options_(std::move(options)),
      delivery_log_(options_.delivery_log_path),
      click_log_(options_.click_log_path),
      rng_(options_.seed) {
  // Restart recovery: replay the logs so click lookups and id allocation
  // continue where the previous process stopped.
  for (const auto& record : logs::read_delivery_log(options_.delivery_log_path)) {
    ++set_counter_;
    for (const auto& item : record.items) {
      rec_to_partner_[item.rec_id] = item.partner_id;
    }
  }
  for (const auto& click : logs::read_click_log(options_.click_log_path)) {
    if (!click.duplicate) clicked_.insert(click.rec_id);
  }
}

std::string RecommenderService::next_set_id() {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "s%08llu",
                static_cast<unsigned long long>(++set_counter_));
  return buf;
}

HttpResult RecommenderService::handle_related_documents(
    const std::string& partner_doc_id) {
  const corpus::DocumentStore& store = engines_->store();
  const corpus::Document* doc = store.find_by_partner_id(partner_doc_id);
  if (!doc) {
    std::fprintf(stderr, "litrec: 404 unknown document id: %s\n",
                 partner_doc_id.c_str());
    return {404, "application/xml",
            render_error_xml(404, "unknown document id: " + partner_doc_id),
            std::nullopt};
  }
  try {
    // Sampling state is the only shared mutable piece of the choice path:
    // derive a per-request generator under the lock, then compute over the
    // immutable corpus and indexes without it.
    recsys::Rng request_rng;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      request_rng.seed(rng_());
    }
    recsys::AlgorithmChoice choice =
        recsys::choose_algorithm(*doc, engines_->config(), request_rng);
    auto [items, fallback_used] = engines_->recommend_with_fallback(
        *doc, choice, engines_->config().set_size, request_rng);

    std::lock_guard<std::mutex> lock(mutex_);
    std::string set_id = next_set_id();
    logs::DeliveryRecord record;
    record.set_id = set_id;
    record.requested_partner_id = doc->partner_id;
    record.language = doc->language;
    record.algorithm = recsys::algorithm_name(choice.algorithm);
    if (choice.keyphrase_variant) {
      logs::VariantInfo v;
      v.source = keyphrase::source_name(choice.keyphrase_variant->source);
      v.ngram_combo = choice.keyphrase_variant->ngram_combo;
      v.count = choice.keyphrase_variant->count;
      record.variant = std::move(v);
    }
    record.language_filter = choice.random_language_filter;
    record.fallback_used = fallback_used;
    int rank = 0;
    for (const recsys::Item& item : items) {
      const corpus::Document* rec_doc = store.find_by_internal_id(item.internal_id);
      logs::DeliveredItem row;
      row.rec_id = set_id + "-r" + std::to_string(++rank);
      row.partner_id = rec_doc ? rec_doc->partner_id : item.internal_id;
      row.rank = rank;
      row.score = item.score;
      record.items.push_back(std::move(row));
    }
    record.delivered_at = logs::now_iso8601_utc();

    // An empty set is not a delivery; nothing to log or click.
    if (!record.items.empty()) {
      delivery_log_.append(logs::to_json_line(record));
      for (const auto& item : record.items) {
        rec_to_partner_[item.rec_id] = item.partner_id;
      }
    }
    return {200, "application/xml",
            render_related_articles_xml(set_id, store, record.items,
                                        options_.base_url),
            std::nullopt};
  } catch (const std::exception& e) {
    std::fprintf(stderr, "litrec: 500 while serving %s: %s\n",
                 partner_doc_id.c_str(), e.what());
    return {500, "application/xml", render_error_xml(500, e.what()), std::nullopt};
  }
}

HttpResult RecommenderService::handle_click(const std::string& rec_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = rec_to_partner_.find(rec_id);
  if (it == rec_to_partner_.end()) {
    return {404, "application/xml",
            render_error_xml(404, "unknown recommendation id: " + rec_id),
            std::nullopt};
  }
  logs::ClickRecord click;
  click.rec_id = rec_id;
  click.clicked_at = logs::now_iso8601_utc();
  click.duplicate = clicked_.count(rec_id) > 0;
  click_log_.append(logs::to_json_line(click));
  if (!click.duplicate) clicked_.insert(rec_id);

  std::string target =
      replace_placeholder(options_.landing_url_template, "{partner_id}", it->second);
  return {302, "text/plain", "redirecting to " + target + "\n", target};
}

void RecommenderService::export_logs(const std::optional<std::string>& from,
                                     const std::optional<std::string>& to,
                                     const std::string& deliveries_out,
                                     const std::string& clicks_out) const {
  auto in_range = [&](const std::string& ts) {
    if (from && ts < *from) return false;
    if (to && ts > *to) return false;
    return true;
  };
  // referential integrity: every click must join to a delivered item
  std::set<std::string> known_recs;
  for (const auto& record : logs::read_delivery_log(options_.delivery_log_path)) {
    for (const auto& item : record.items) known_recs.insert(item.rec_id);
  }
  std::string orphans;

  auto copy_filtered = [&](const std::string& in_path, const std::string& out_path,
                           bool is_delivery) {
    std::ifstream in(in_path);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot write export file: " + out_path);
    if (!in) return;  // no log yet: export is empty
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::string ts;
      if (is_delivery) {
        ts = logs::delivery_from_json_line(line).delivered_at;
      } else {
        logs::ClickRecord click = logs::click_from_json_line(line);
        ts = click.clicked_at;
        if (known_recs.count(click.rec_id) == 0) orphans += " " + click.rec_id;
      }
      if (in_range(ts)) out << line << '\n';
    }
  };
  copy_filtered(options_.delivery_log_path, deliveries_out, true);
  copy_filtered(options_.click_log_path, clicks_out, false);
  if (!orphans.empty()) {
    throw ContractViolationError("click log references unknown rec_ids:" + orphans);
  }
}

void attach_routes(httplib::Server& server, RecommenderService& service) {
  auto apply = [](const HttpResult& r, httplib::Response& res) {
    res.status = r.status;
    if (r.location) res.set_header("Location", *r.location);
    res.set_content(r.body, r.content_type);
  };
  server.Get(R"(/v1/documents/([^/]+)/related_documents/?)",
             [&service, apply](const httplib::Request& req, httplib::Response& res) {
               apply(service.handle_related_documents(req.matches[1]), res);
             });
  server.Get(R"(/v1/recommendations/([^/]+)/click/?)",
             [&service, apply](const httplib::Request& req, httplib::Response& res) {
               apply(service.handle_click(req.matches[1]), res);
             });
}

int run_http_server(RecommenderService& service, const std::string& host, int port) {
  httplib::Server server;
  attach_routes(server, service);
  std::fprintf(stderr, "litrec: serving on %s:%d\n", host.c_str(), port);
  if (!server.listen(host, port)) {
    std::fprintf(stderr, "litrec: failed to bind %s:%d\n", host.c_str(), port);
    return 1;
  }
  return 0;
}

}  // namespace litrec::service
