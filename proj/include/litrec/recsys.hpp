#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "litrec/config.hpp"
#include "litrec/corpus.hpp"
#include "litrec/index.hpp"
#include "litrec/keyphrase.hpp"

namespace litrec::recsys {

enum class Algorithm { random, mlt, stereotype, most_popular, keyphrase };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

/// Every stochastic operation takes the generator explicitly so runs are
/// replayable from a seed.
using Rng = std::mt19937_64;

struct KeyphraseVariant {
  keyphrase::Source source = keyphrase::Source::title_only;
  std::vector<int> ngram_combo;  // sorted, non-empty subset of {1,2,3}
  int count = 1;                 // keyphrases used per class, 1..19
};

struct AlgorithmChoice {
  Algorithm algorithm = Algorithm::mlt;
  std::optional<bool> random_language_filter;      // random only
  std::optional<KeyphraseVariant> keyphrase_variant;  // keyphrase only
  bool fallback_used = false;  // set post hoc when keyphrase fell back to mlt
};

struct ExperimentConfig {
  std::map<Algorithm, double> weights_english;
  std::map<Algorithm, double> weights_non_english;
  int set_size = 6;
  std::vector<std::string> stereotype_list;  // partner ids, served in order
  std::vector<std::string> popular_list;     // partner ids, served in order
  int keyphrase_max_count = 19;

  /// Throws InvalidArgumentError when weights do not sum to 1, the
  /// non-English keyphrase weight is nonzero, or a curated list is too
  /// short or references unknown documents.
  void validate(const corpus::DocumentStore& store) const;

  /// English 70/20/4/4/2; non-English re-routes the keyphrase mass to mlt.
  static ExperimentConfig experiment_defaults();

  /// Reads set_size, weight.en.*, weight.other.*, stereotype_list and
  /// popular_list (paths to one-partner-id-per-line files).
  static ExperimentConfig from_config(const KeyValueConfig& cfg);
};

/// Weighted draw over the arms; zero-weight arms are never selected.
Algorithm sample_algorithm(const std::map<Algorithm, double>& weights, Rng& rng);

/// Uniform over available sources, the 7 non-empty n-gram combos, and
/// counts 1..max_count.
KeyphraseVariant sample_keyphrase_variant(
    Rng& rng, const std::vector<keyphrase::Source>& available_sources,
    int max_count = 19);

/// Routes by language ("en" exactly), samples the arm, and fills in the
/// per-arm extras: the random language-filter coin and the keyphrase
/// variant.
AlgorithmChoice choose_algorithm(const corpus::Document& query_doc,
                                 const ExperimentConfig& config, Rng& rng);

struct Item {
  std::string internal_id;
  std::optional<double> score;
};

/// The five baseline engines over immutable corpus, indexes and keyphrase
/// store. Stateless across requests.
class Engines {
 public:
  Engines(const corpus::DocumentStore* store,
          const index::InvertedIndex* term_index,
          const index::InvertedIndex* keyphrase_index,
          const keyphrase::KeyphraseStore* keyphrase_store,
          ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const corpus::DocumentStore& store() const { return *store_; }

  /// n distinct documents uniformly without replacement, excluding the
  /// query document; with the filter on, restricted to the query
  /// document's language.
  std::vector<Item> recommend_random(const corpus::Document& query_doc,
                                     bool language_filter, std::size_t n,
                                     Rng& rng) const;

  /// First n entries of the curated list; independent of the query.
  std::vector<Item> recommend_stereotype(std::size_t n) const;
  std::vector<Item> recommend_most_popular(std::size_t n) const;

  std::vector<Item> recommend_mlt(const corpus::Document& query_doc,
                                  std::size_t n) const;

  /// Top `variant.count` stored keyphrases per class in the combo as the
  /// query bag. An empty return is the empty-signal that triggers the
  /// fallback; it is not an error.
  std::vector<Item> recommend_keyphrase(const corpus::Document& query_doc,
                                        const KeyphraseVariant& variant,
                                        std::size_t n) const;

  /// Dispatches on the choice. Iff the keyphrase arm returns the
  /// empty-signal, runs mlt exactly once and reports fallback_used=true.
  std::pair<std::vector<Item>, bool> recommend_with_fallback(
      const corpus::Document& query_doc, const AlgorithmChoice& choice,
      std::size_t n, Rng& rng) const;

 private:
  const corpus::DocumentStore* store_;
  const index::InvertedIndex* term_index_;
  const index::InvertedIndex* keyphrase_index_;
  const keyphrase::KeyphraseStore* keyphrase_store_;
  ExperimentConfig config_;

  std::vector<std::string> stereotype_internal_;
  std::vector<std::string> popular_internal_;
  std::vector<std::string> all_ids_;                       // ascending
  std::map<std::string, std::vector<std::string>> ids_by_language_;
};

}  // namespace litrec::recsys
