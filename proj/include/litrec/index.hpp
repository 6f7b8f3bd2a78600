#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "litrec/corpus.hpp"
#include "litrec/textpipe.hpp"

namespace litrec::index {

/// BM25 parameters and the IDF shape used for every similarity query.
inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

/// Stems of one keyphrase joined into a single indexing unit.
/// U+001F can never occur inside a token, so units are unambiguous.
inline constexpr char kKeyphraseJoin = 0x1f;

struct Posting {
  std::string doc_id;
  std::int64_t tf = 0;
};

struct RankedResult {
  std::string doc_id;
  double score = 0.0;
};

/// Immutable inverted index over either metadata terms or keyphrase units.
/// Built once, then queried concurrently.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// term -> postings sorted by doc id ascending
  const std::map<std::string, std::vector<Posting>>& postings() const {
    return postings_;
  }
  const std::map<std::string, std::int64_t>& doc_lengths() const {
    return doc_lengths_;
  }
  std::int64_t doc_count() const { return static_cast<std::int64_t>(doc_lengths_.size()); }
  double avg_doc_length() const { return avg_doc_length_; }
  bool contains_doc(std::string_view doc_id) const;

  /// The document's own indexed terms with frequencies (its query bag).
  const std::vector<std::pair<std::string, std::int64_t>>* document_terms(
      std::string_view doc_id) const;

  /// BM25 over the query document's whole term bag; excludes the query
  /// document, keeps positive scores, returns at most n results ordered
  /// by score descending then doc id ascending.
  std::vector<RankedResult> mlt_query(std::string_view query_doc_id,
                                      std::size_t n) const;

  /// Same contract with an explicit query bag (used for keyphrase
  /// queries); every unit counts once.
  std::vector<RankedResult> bag_query(
      const std::vector<std::pair<std::string, std::int64_t>>& bag,
      std::string_view exclude_doc_id, std::size_t n) const;

  /// Versioned snapshot with the LITREC-IDX-1 magic header.
  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);

  /// Builder: feed documents in any order; finalize() sorts postings and
  /// computes the length statistics.
  void add_document(std::string doc_id, const std::vector<std::string>& units,
                    bool count_duplicates);
  void finalize();

 private:
  std::map<std::string, std::vector<Posting>> postings_;
  std::map<std::string, std::int64_t> doc_lengths_;
  std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> forward_;
  double avg_doc_length_ = 0.0;
};

/// Indexes title + abstract + keywords + published_in of every document,
/// tokenized, stopword-filtered and stemmed.
InvertedIndex build_term_index(const corpus::DocumentStore& store,
                               const textpipe::Pipeline& pipeline);

/// Indexes precomputed keyphrase units, one count per document per unit.
InvertedIndex build_keyphrase_index(
    const std::map<std::string, std::vector<std::string>>& units_by_doc);

/// The BM25 IDF: ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::int64_t doc_count, std::int64_t doc_freq);

/// One term's contribution for a document with term frequency tf and
/// length dl in an index with average length avgdl.
double bm25_term_score(double idf, std::int64_t tf, std::int64_t dl, double avgdl);

/// The text the term index sees for a document.
std::string indexable_text(const corpus::Document& doc);

/// Joins keyphrase stems into one indexing unit.
std::string join_stems(const std::vector<std::string>& stems);

}  // namespace litrec::index
