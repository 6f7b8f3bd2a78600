#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litrec/config.hpp"
#include "litrec/corpus.hpp"
#include "litrec/textpipe.hpp"

namespace litrec::keyphrase {

enum class Source { title_only, title_and_abstract };

std::string source_name(Source s);
std::optional<Source> source_from_name(std::string_view name);

/// A contiguous 1-3 token window that matched a POS pattern. Windows with
/// the same stem sequence merge into one candidate holding every start
/// position.
struct Candidate {
  std::vector<std::string> stems;
  std::string surface_first;        // surfaces at the first occurrence
  int ngram = 0;                    // == stems.size(), 1..3
  std::vector<std::size_t> occurrences;  // start positions, strictly increasing
  std::string pattern;              // matched tag sequence, e.g. "NN NN"
};

struct FeatureVector {
  double depth = 0.0;       // 1 - first / stream_length
  double lifespan = 0.0;    // (last - first + ngram) / stream_length
  std::int64_t frequency = 0;
  double maximality = 0.0;  // 1, or clamp(1 - max_super_freq / freq, 0, 1)
};

/// Linear scoring weights; frequency enters as log(1 + f).
struct ScoringWeights {
  double depth = 0.0;
  double lifespan = 0.0;
  double frequency = 0.0;
  double maximality = 0.0;
};

struct Keyphrase {
  std::vector<std::string> stems;
  int ngram = 0;
  double score = 0.0;
  Source source = Source::title_only;
  std::size_t first_occurrence = 0;
};

/// The three per-class selections for one (document, source).
struct KeyphraseSet {
  std::vector<Keyphrase> by_class[3];  // [0]=unigrams, [1]=bigrams, [2]=trigrams

  const std::vector<Keyphrase>& ngram(int n) const { return by_class[n - 1]; }
  std::vector<Keyphrase>& ngram(int n) { return by_class[n - 1]; }
  bool empty() const {
    return by_class[0].empty() && by_class[1].empty() && by_class[2].empty();
  }
};

using PosPattern = std::vector<std::string>;

struct ExtractionOptions {
  std::vector<PosPattern> patterns;
  ScoringWeights title_only_weights;
  ScoringWeights title_and_abstract_weights;
  int top_k = 19;

  const ScoringWeights& weights_for(Source s) const {
    return s == Source::title_only ? title_only_weights : title_and_abstract_weights;
  }

  static ExtractionOptions defaults();
  /// Reads kp.pattern.N, kp.weights.<source>.<feature> and kp.top_k keys.
  static ExtractionOptions from_config(const KeyValueConfig& cfg);
};

/// Every 1-3 token window whose tag sequence equals a pattern, contains no
/// stopword and stays inside one part of the stream.
std::vector<Candidate> extract_candidates(const textpipe::TokenStream& stream,
                                          const std::vector<PosPattern>& patterns);

/// Statistical features of one candidate. all_candidates supplies the
/// super-candidates for the maximality term.
FeatureVector compute_features(const Candidate& candidate,
                               std::size_t token_stream_length,
                               const std::vector<Candidate>& all_candidates);

double keyphraseness(const FeatureVector& features, const ScoringWeights& weights);

/// Per n-gram class, the k highest-scoring candidates sorted by score
/// descending; ties broken by earlier first occurrence, then by stems.
KeyphraseSet select_keyphrases(const std::vector<Candidate>& candidates,
                               std::size_t token_stream_length,
                               const ScoringWeights& weights, Source source,
                               int k = 19);

/// Full pipeline for one document with the preset weights of the source.
/// title_and_abstract requires an abstract.
KeyphraseSet keyphrases_for_document(const corpus::Document& doc, Source source,
                                     const textpipe::Pipeline& pipeline,
                                     const ExtractionOptions& options);

/// Extracted keyphrases for a corpus, keyed by internal_id and source.
/// Extraction runs only for English documents; title_and_abstract only
/// where an abstract exists.
class KeyphraseStore {
 public:
  static KeyphraseStore build(const corpus::DocumentStore& store,
                              const textpipe::Pipeline& pipeline,
                              const ExtractionOptions& options);

  void put(const std::string& internal_id, Source source, KeyphraseSet set);
  const KeyphraseSet* find(const std::string& internal_id, Source source) const;

  /// One JSONL row per keyphrase: {partner_id, source, ngram, stems, score}.
  void write_jsonl(const std::string& path, Source source,
                   const corpus::DocumentStore& store) const;
  void load_jsonl(const std::string& path, const corpus::DocumentStore& store);

  /// Index-side units per document: the richest available source
  /// (title_and_abstract when present, else title_only), each keyphrase
  /// once.
  std::map<std::string, std::vector<std::string>> index_units() const;

  std::size_t document_count() const;

 private:
  // internal_id -> per-source sets
  std::map<std::string, std::map<Source, KeyphraseSet>> sets_;
};

}  // namespace litrec::keyphrase
