#include "litrec/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "litrec/errors.hpp"

namespace litrec::index {

namespace {
constexpr std::string_view kSnapshotMagic = "LITREC-IDX-1";
}

bool InvertedIndex::contains_doc(std::string_view doc_id) const {
  return doc_lengths_.count(std::string(doc_id)) > 0;
}

const std::vector<std::pair<std::string, std::int64_t>>*
InvertedIndex::document_terms(std::string_view doc_id) const {
  auto it = forward_.find(std::string(doc_id));
  return it == forward_.end() ? nullptr : &it->second;
}

void InvertedIndex::add_document(std::string doc_id,
                                 const std::vector<std::string>& units,
                                 bool count_duplicates) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& u : units) {
    if (count_duplicates) {
      ++counts[u];
    } else {
      counts[u] = 1;
    }
  }
  std::int64_t length = 0;
  auto& fwd = forward_[doc_id];
  for (const auto& [term, tf] : counts) {
    length += tf;
    fwd.emplace_back(term, tf);
    postings_[term].push_back({doc_id, tf});
  }
  doc_lengths_[doc_id] = length;
}

void InvertedIndex::finalize() {
  double total = 0.0;
  for (const auto& [doc, len] : doc_lengths_) total += static_cast<double>(len);
  avg_doc_length_ = doc_lengths_.empty() ? 0.0 : total / static_cast<double>(doc_lengths_.size());
  for (auto& [term, list] : postings_) {
    std::sort(list.begin(), list.end(),
              [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
  }
}

double bm25_idf(std::int64_t doc_count, std::int64_t doc_freq) {
  double n = static_cast<double>(doc_count);
  double df = static_cast<double>(doc_freq);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double bm25_term_score(double idf, std::int64_t tf, std::int64_t dl, double avgdl) {
  double f = static_cast<double>(tf);
  double norm = avgdl > 0.0 ? static_cast<double>(dl) / avgdl : 0.0;
  return idf * (f * (kBm25K1 + 1.0)) / (f + kBm25K1 * (1.0 - kBm25B + kBm25B * norm));
}

std::vector<RankedResult> InvertedIndex::bag_query(
    const std::vector<std::pair<std::string, std::int64_t>>& bag,
    std::string_view exclude_doc_id, std::size_t n) const {
  if (bag.empty()) throw InvalidArgumentError("empty query bag");
  std::unordered_map<std::string, double> scores;
  for (const auto& [term, qtf] : bag) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    double idf = bm25_idf(doc_count(), static_cast<std::int64_t>(it->second.size()));
    for (const Posting& p : it->second) {
      if (p.doc_id == exclude_doc_id) continue;
      double contribution = bm25_term_score(idf, p.tf, doc_lengths_.at(p.doc_id),
                                            avg_doc_length_);
      scores[p.doc_id] += static_cast<double>(qtf) * contribution;
    }
  }
  std::vector<RankedResult> results;
  results.reserve(scores.size());
  for (auto& [doc, score] : scores) {
    if (score > 0.0) results.push_back({doc, score});
  }
  std::sort(results.begin(), results.end(), [](const RankedResult& a, const RankedResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (results.size() > n) results.resize(n);
  return results;
}

std::vector<RankedResult> InvertedIndex::mlt_query(std::string_view query_doc_id,
                                                   std::size_t n) const {
  const auto* terms = document_terms(query_doc_id);
  if (!terms) {
    throw NotFoundError("document not indexed: " + std::string(query_doc_id));
  }
  if (terms->empty()) return {};
  return bag_query(*terms, query_doc_id, n);
}

void InvertedIndex::save(const std::string& path) const {
  nlohmann::json j;
  j["doc_count"] = doc_count();
  j["avg_doc_length"] = avg_doc_length_;
  j["doc_lengths"] = doc_lengths_;
  nlohmann::json post = nlohmann::json::object();
  for (const auto& [term, list] : postings_) {
    nlohmann::json rows = nlohmann::json::array();
    for (const Posting& p : list) rows.push_back({p.doc_id, p.tf});
    post[term] = std::move(rows);
  }
  j["postings"] = std::move(post);

  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot write index snapshot: " + path);
  out << kSnapshotMagic << '\n' << j.dump() << '\n';
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgumentError("cannot open index snapshot: " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != kSnapshotMagic) {
    throw InvalidArgumentError("not a litrec index snapshot (bad magic): " + path);
  }
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j = nlohmann::json::parse(body);

  InvertedIndex idx;
  idx.doc_lengths_ = j.at("doc_lengths").get<std::map<std::string, std::int64_t>>();
  // every known document gets a forward entry, term-free documents included
  for (const auto& [doc, len] : idx.doc_lengths_) idx.forward_[doc];
  for (auto& [term, rows] : j.at("postings").items()) {
    auto& list = idx.postings_[term];
    for (auto& row : rows) {
      list.push_back({row.at(0).get<std::string>(), row.at(1).get<std::int64_t>()});
    }
    for (const Posting& p : list) {
      idx.forward_[p.doc_id].emplace_back(term, p.tf);
    }
  }
  idx.avg_doc_length_ = j.at("avg_doc_length").get<double>();
  return idx;
}

std::string indexable_text(const corpus::Document& doc) {
  std::string text = doc.title;
  if (doc.abstract) {
    text += ' ';
    text += *doc.abstract;
  }
  for (const auto& kw : doc.keywords) {
    text += ' ';
    text += kw;
  }
  if (doc.published_in) {
    text += ' ';
    text += *doc.published_in;
  }
  return text;
}

InvertedIndex build_term_index(const corpus::DocumentStore& store,
                               const textpipe::Pipeline& pipeline) {
  InvertedIndex idx;
  for (const corpus::Document* doc : store.all()) {
    idx.add_document(doc->internal_id, pipeline.index_terms(indexable_text(*doc)),
                     /*count_duplicates=*/true);
  }
  idx.finalize();
  return idx;
}

InvertedIndex build_keyphrase_index(
    const std::map<std::string, std::vector<std::string>>& units_by_doc) {
  InvertedIndex idx;
  for (const auto& [doc_id, units] : units_by_doc) {
    idx.add_document(doc_id, units, /*count_duplicates=*/false);
  }
  idx.finalize();
  return idx;
}

std::string join_stems(const std::vector<std::string>& stems) {
  std::string out;
  for (std::size_t i = 0; i < stems.size(); ++i) {
    if (i > 0) out.push_back(kKeyphraseJoin);
    out += stems[i];
  }
  return out;
}

}  // namespace litrec::index
