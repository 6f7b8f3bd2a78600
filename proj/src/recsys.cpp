#include "litrec/recsys.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "litrec/errors.hpp"

namespace litrec::recsys {

namespace {

constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::random, Algorithm::mlt, Algorithm::stereotype,
    Algorithm::most_popular, Algorithm::keyphrase,
};

// the 7 non-empty subsets of {1,2,3}, fixed order
const std::vector<std::vector<int>>& ngram_combos() {
  static const std::vector<std::vector<int>> combos = {
      {1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3},
  };
  return combos;
}

std::vector<std::string> read_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open id list: " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.erase(0, 1);
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

double weight_sum(const std::map<Algorithm, double>& weights) {
  double sum = 0.0;
  for (const auto& [arm, w] : weights) sum += w;
  return sum;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::random: return "random";
    case Algorithm::mlt: return "mlt";
    case Algorithm::stereotype: return "stereotype";
    case Algorithm::most_popular: return "most_popular";
    case Algorithm::keyphrase: return "keyphrase";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

void ExperimentConfig::validate(const corpus::DocumentStore& store) const {
  for (const auto* weights : {&weights_english, &weights_non_english}) {
    double sum = weight_sum(*weights);
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgumentError("algorithm weights must sum to 1, got " +
                                 std::to_string(sum));
    }
    for (const auto& [arm, w] : *weights) {
      if (w < 0.0) throw InvalidArgumentError("negative algorithm weight");
    }
  }
  auto kp = weights_non_english.find(Algorithm::keyphrase);
  if (kp != weights_non_english.end() && kp->second != 0.0) {
    throw InvalidArgumentError("keyphrase weight must be 0 for non-English routing");
  }
  if (set_size < 1) throw InvalidArgumentError("set_size must be >= 1");
  for (const auto& [name, list] :
       {std::pair{"stereotype_list", &stereotype_list},
        std::pair{"popular_list", &popular_list}}) {
    if (list->size() < static_cast<std::size_t>(set_size)) {
      throw InvalidArgumentError(std::string(name) + " holds fewer than set_size ids");
    }
    for (const auto& pid : *list) {
      if (!store.find_by_partner_id(pid)) {
        throw InvalidArgumentError(std::string(name) + " references unknown partner id: " + pid);
      }
    }
  }
}

ExperimentConfig ExperimentConfig::experiment_defaults() {
  ExperimentConfig cfg;
  cfg.weights_english = {
      {Algorithm::keyphrase, 0.70}, {Algorithm::mlt, 0.20},
      {Algorithm::stereotype, 0.04}, {Algorithm::most_popular, 0.04},
      {Algorithm::random, 0.02},
  };
  cfg.weights_non_english = {
      {Algorithm::keyphrase, 0.0},  {Algorithm::mlt, 0.90},
      {Algorithm::stereotype, 0.04}, {Algorithm::most_popular, 0.04},
      {Algorithm::random, 0.02},
  };
  cfg.set_size = 6;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& cfg) {
  ExperimentConfig out = experiment_defaults();
  out.set_size = static_cast<int>(cfg.get_long("set_size", out.set_size));
  auto read_weights = [&](const std::string& prefix, std::map<Algorithm, double>& w) {
    for (Algorithm a : kAllAlgorithms) {
      std::string key = prefix + "." + algorithm_name(a);
      if (cfg.has(key)) w[a] = cfg.get_double(key, 0.0);
    }
  };
  read_weights("weight.en", out.weights_english);
  read_weights("weight.other", out.weights_non_english);
  if (auto path = cfg.get("stereotype_list")) out.stereotype_list = read_id_list(*path);
  if (auto path = cfg.get("popular_list")) out.popular_list = read_id_list(*path);
  out.keyphrase_max_count =
      static_cast<int>(cfg.get_long("keyphrase_max_count", out.keyphrase_max_count));
  return out;
}

Algorithm sample_algorithm(const std::map<Algorithm, double>& weights, Rng& rng) {
  double total = weight_sum(weights);
  if (total <= 0.0) throw InvalidArgumentError("algorithm weights are all zero");
  std::uniform_real_distribution<double> dist(0.0, total);
  double u = dist(rng);
  double cumulative = 0.0;
  // iterate in fixed arm order, not map order, so draws are reproducible
  Algorithm last_positive = Algorithm::mlt;
  bool any = false;
  for (Algorithm a : kAllAlgorithms) {
    auto it = weights.find(a);
    if (it == weights.end() || it->second <= 0.0) continue;
    cumulative += it->second;
    last_positive = a;
    any = true;
    if (u < cumulative) return a;
  }
  if (!any) throw InvalidArgumentError("algorithm weights are all zero");
  return last_positive;  // u landed on the upper boundary
}

KeyphraseVariant sample_keyphrase_variant(
    Rng& rng, const std::vector<keyphrase::Source>& available_sources,
    int max_count) {
  if (available_sources.empty()) {
    throw InvalidArgumentError("no keyphrase sources available");
  }
  if (max_count < 1) throw InvalidArgumentError("max_count must be >= 1");
  KeyphraseVariant v;
  std::uniform_int_distribution<std::size_t> source_dist(0, available_sources.size() - 1);
  v.source = available_sources[source_dist(rng)];
  std::uniform_int_distribution<std::size_t> combo_dist(0, ngram_combos().size() - 1);
  v.ngram_combo = ngram_combos()[combo_dist(rng)];
  std::uniform_int_distribution<int> count_dist(1, max_count);
  v.count = count_dist(rng);
  return v;
}

AlgorithmChoice choose_algorithm(const corpus::Document& query_doc,
                                 const ExperimentConfig& config, Rng& rng) {
  bool english = query_doc.language && *query_doc.language == "en";
  AlgorithmChoice choice;
  choice.algorithm = sample_algorithm(
      english ? config.weights_english : config.weights_non_english, rng);
  if (choice.algorithm == Algorithm::random) {
    std::bernoulli_distribution coin(0.5);
    choice.random_language_filter = coin(rng);
  } else if (choice.algorithm == Algorithm::keyphrase) {
    std::vector<keyphrase::Source> sources{keyphrase::Source::title_only};
    if (query_doc.has_abstract()) {
      sources.push_back(keyphrase::Source::title_and_abstract);
    }
    choice.keyphrase_variant =
        sample_keyphrase_variant(rng, sources, config.keyphrase_max_count);
  }
  return choice;
}

Engines::Engines(const corpus::DocumentStore* store,
                 const index::InvertedIndex* term_index,
                 const index::InvertedIndex* keyphrase_index,
                 const keyphrase::KeyphraseStore* keyphrase_store,
                 ExperimentConfig config)
    : store_(store),
      term_index_(term_index),
      keyphrase_index_(keyphrase_index),
      keyphrase_store_(keyphrase_store),
      config_(std::move(config)) {
  config_.validate(*store_);
  auto resolve = [&](const std::vector<std::string>& partner_ids) {
    std::vector<std::string> internal;
    internal.reserve(partner_ids.size());
    for (const auto& pid : partner_ids) {
      internal.push_back(store_->find_by_partner_id(pid)->internal_id);
    }
    return internal;
  };
  stereotype_internal_ = resolve(config_.stereotype_list);
  popular_internal_ = resolve(config_.popular_list);
  for (const corpus::Document* doc : store_->all()) {
    all_ids_.push_back(doc->internal_id);
    ids_by_language_[doc->language.value_or("unspecified")].push_back(doc->internal_id);
  }
}

std::vector<Item> Engines::recommend_random(const corpus::Document& query_doc,
                                            bool language_filter, std::size_t n,
                                            Rng& rng) const {
  const std::vector<std::string>* pool = &all_ids_;
  if (language_filter) {
    auto it = ids_by_language_.find(query_doc.language.value_or("unspecified"));
    if (it == ids_by_language_.end()) return {};
    pool = &it->second;
  }
  // partial Fisher-Yates over pool indexes; the query document is skipped
  std::vector<std::uint32_t> order(pool->size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::vector<Item> items;
  std::size_t next = 0;
  while (items.size() < n && next < order.size()) {
    std::uniform_int_distribution<std::size_t> pick(next, order.size() - 1);
    std::swap(order[next], order[pick(rng)]);
    const std::string& id = (*pool)[order[next]];
    ++next;
    if (id == query_doc.internal_id) continue;
    items.push_back({id, std::nullopt});
  }
  return items;
}

std::vector<Item> Engines::recommend_stereotype(std::size_t n) const {
  if (stereotype_internal_.size() < n) {
    std::cerr << "litrec: stereotype list shorter than requested set ("
              << stereotype_internal_.size() << " < " << n << ")\n";
  }
  std::vector<Item> items;
  for (std::size_t i = 0; i < n && i < stereotype_internal_.size(); ++i) {
    items.push_back({stereotype_internal_[i], std::nullopt});
  }
  return items;
}

std::vector<Item> Engines::recommend_most_popular(std::size_t n) const {
  if (popular_internal_.size() < n) {
    std::cerr << "litrec: popular list shorter than requested set ("
              << popular_internal_.size() << " < " << n << ")\n";
  }
  std::vector<Item> items;
  for (std::size_t i = 0; i < n && i < popular_internal_.size(); ++i) {
    items.push_back({popular_internal_[i], std::nullopt});
  }
  return items;
}

std::vector<Item> Engines::recommend_mlt(const corpus::Document& query_doc,
                                         std::size_t n) const {
  std::vector<Item> items;
  for (const auto& r : term_index_->mlt_query(query_doc.internal_id, n)) {
    items.push_back({r.doc_id, r.score});
  }
  return items;
}

std::vector<Item> Engines::recommend_keyphrase(const corpus::Document& query_doc,
                                               const KeyphraseVariant& variant,
                                               std::size_t n) const {
  const keyphrase::KeyphraseSet* set =
      keyphrase_store_->find(query_doc.internal_id, variant.source);
  if (!set) return {};

  std::vector<std::pair<std::string, std::int64_t>> bag;
  for (int cls : variant.ngram_combo) {
    const auto& ranked = set->ngram(cls);
    std::size_t take = std::min<std::size_t>(ranked.size(), variant.count);
    for (std::size_t i = 0; i < take; ++i) {
      bag.emplace_back(index::join_stems(ranked[i].stems), 1);
    }
  }
  if (bag.empty()) return {};

  std::vector<Item> items;
  for (const auto& r : keyphrase_index_->bag_query(bag, query_doc.internal_id, n)) {
    items.push_back({r.doc_id, r.score});
  }
  return items;
}

std::pair<std::vector<Item>, bool> Engines::recommend_with_fallback(
    const corpus::Document& query_doc, const AlgorithmChoice& choice,
    std::size_t n, Rng& rng) const {
  // Delivered sets never contain the requested document. The curated-list
  // arms are query-independent, so the filter lives here, at set assembly.
  auto without_query = [&](std::vector<Item> items) {
    std::erase_if(items, [&](const Item& item) {
      return item.internal_id == query_doc.internal_id;
    });
    return items;
  };
  switch (choice.algorithm) {
    case Algorithm::random:
      return {recommend_random(query_doc, choice.random_language_filter.value_or(false),
                               n, rng),
              false};
    case Algorithm::mlt:
      return {recommend_mlt(query_doc, n), false};
    case Algorithm::stereotype:
      return {without_query(recommend_stereotype(n)), false};
    case Algorithm::most_popular:
      return {without_query(recommend_most_popular(n)), false};
    case Algorithm::keyphrase: {
      if (!choice.keyphrase_variant) {
        throw InvalidArgumentError("keyphrase choice without a variant");
      }
      std::vector<Item> items =
          recommend_keyphrase(query_doc, *choice.keyphrase_variant, n);
      if (!items.empty()) return {std::move(items), false};
      return {recommend_mlt(query_doc, n), true};
    }
  }
  throw InvalidArgumentError("unknown algorithm");
}

}  // namespace litrec::recsys
