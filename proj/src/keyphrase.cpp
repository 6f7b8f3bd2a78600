#include "litrec/keyphrase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "litrec/errors.hpp"
#include "litrec/index.hpp"

namespace litrec::keyphrase {

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

// true when `inner` occurs contiguously inside `outer`
bool contains_contiguous(const std::vector<std::string>& outer,
                         const std::vector<std::string>& inner) {
  if (inner.size() > outer.size()) return false;
  for (std::size_t start = 0; start + inner.size() <= outer.size(); ++start) {
    bool match = true;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      if (outer[start + k] != inner[k]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

std::string source_name(Source s) {
  return s == Source::title_only ? "title_only" : "title_and_abstract";
}

std::optional<Source> source_from_name(std::string_view name) {
  if (name == "title_only") return Source::title_only;
  if (name == "title_and_abstract") return Source::title_and_abstract;
  return std::nullopt;
}

ExtractionOptions ExtractionOptions::defaults() {
  ExtractionOptions opt;
  opt.patterns = {
      {"NN"},       {"JJ"},           {"NN", "NN"},       {"JJ", "NN"},
      {"NN", "NN", "NN"},             {"JJ", "NN", "NN"}, {"JJ", "JJ", "NN"},
  };
  // Lifespan carries no signal on short titles, so it is zeroed there.
  opt.title_only_weights = {1.0, 0.0, 0.5, 1.0};
  opt.title_and_abstract_weights = {0.6, 0.8, 1.0, 1.0};
  opt.top_k = 19;
  return opt;
}

ExtractionOptions ExtractionOptions::from_config(const KeyValueConfig& cfg) {
  ExtractionOptions opt = defaults();
  auto pattern_keys = cfg.keys_with_prefix("kp.pattern.");
  if (!pattern_keys.empty()) {
    opt.patterns.clear();
    for (const auto& key : pattern_keys) {
      PosPattern pattern;
      std::istringstream in(cfg.require(key));
      std::string tag;
      while (in >> tag) pattern.push_back(tag);
      if (pattern.empty() || pattern.size() > 3) {
        throw InvalidArgumentError("config key " + key + ": patterns take 1-3 tags");
      }
      opt.patterns.push_back(std::move(pattern));
    }
  }
  auto read_weights = [&](const std::string& prefix, ScoringWeights& w) {
    w.depth = cfg.get_double(prefix + ".depth", w.depth);
    w.lifespan = cfg.get_double(prefix + ".lifespan", w.lifespan);
    w.frequency = cfg.get_double(prefix + ".frequency", w.frequency);
    w.maximality = cfg.get_double(prefix + ".maximality", w.maximality);
  };
  read_weights("kp.weights.title_only", opt.title_only_weights);
  read_weights("kp.weights.title_and_abstract", opt.title_and_abstract_weights);
  opt.top_k = static_cast<int>(cfg.get_long("kp.top_k", opt.top_k));
  if (opt.top_k < 1) throw InvalidArgumentError("kp.top_k must be >= 1");
  return opt;
}

std::vector<Candidate> extract_candidates(const textpipe::TokenStream& stream,
                                          const std::vector<PosPattern>& patterns) {
  if (patterns.empty()) throw InvalidArgumentError("no POS patterns configured");

  const auto& tokens = stream.tokens;
  std::map<std::string, std::size_t> by_key;  // joined stems -> index
  std::vector<Candidate> candidates;

  for (std::size_t start = 0; start < tokens.size(); ++start) {
    for (std::size_t len = 1; len <= 3 && start + len <= tokens.size(); ++len) {
      if (!stream.within_one_part(start, len)) continue;

      bool has_stopword = false;
      for (std::size_t k = 0; k < len; ++k) {
        if (tokens[start + k].is_stopword) {
          has_stopword = true;
          break;
        }
      }
      if (has_stopword) continue;

      bool matched = false;
      for (const PosPattern& pattern : patterns) {
        if (pattern.size() != len) continue;
        bool ok = true;
        for (std::size_t k = 0; k < len; ++k) {
          if (tokens[start + k].pos != pattern[k]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          matched = true;
          break;
        }
      }
      if (!matched) continue;

      std::vector<std::string> stems;
      std::vector<std::string> surfaces;
      std::vector<std::string> tags;
      for (std::size_t k = 0; k < len; ++k) {
        stems.push_back(tokens[start + k].stem);
        surfaces.push_back(tokens[start + k].surface);
        tags.push_back(tokens[start + k].pos);
      }
      std::string key = std::to_string(len) + ":" + index::join_stems(stems);
      auto it = by_key.find(key);
      if (it != by_key.end()) {
        candidates[it->second].occurrences.push_back(start);
      } else {
        Candidate c;
        c.stems = std::move(stems);
        c.surface_first = join(surfaces, ' ');
        c.ngram = static_cast<int>(len);
        c.occurrences = {start};
        c.pattern = join(tags, ' ');
        by_key.emplace(std::move(key), candidates.size());
        candidates.push_back(std::move(c));
      }
    }
  }
  return candidates;
}

FeatureVector compute_features(const Candidate& candidate,
                               std::size_t token_stream_length,
                               const std::vector<Candidate>& all_candidates) {
  if (token_stream_length == 0) {
    throw InvalidArgumentError("token stream length must be positive");
  }
  if (candidate.occurrences.empty()) {
    throw ContractViolationError("candidate has no occurrences");
  }
  for (std::size_t pos : candidate.occurrences) {
    if (pos >= token_stream_length) {
      throw ContractViolationError("candidate occurrence out of range");
    }
  }

  double length = static_cast<double>(token_stream_length);
  std::size_t first = candidate.occurrences.front();
  std::size_t last = candidate.occurrences.back();

  FeatureVector f;
  f.depth = 1.0 - static_cast<double>(first) / length;
  f.lifespan =
      (static_cast<double>(last - first) + static_cast<double>(candidate.ngram)) / length;
  f.frequency = static_cast<std::int64_t>(candidate.occurrences.size());

  std::int64_t max_super_freq = 0;
  for (const Candidate& other : all_candidates) {
    if (other.ngram <= candidate.ngram) continue;
    if (!contains_contiguous(other.stems, candidate.stems)) continue;
    max_super_freq = std::max(
        max_super_freq, static_cast<std::int64_t>(other.occurrences.size()));
  }
  if (max_super_freq == 0) {
    f.maximality = 1.0;
  } else {
    double ratio = 1.0 - static_cast<double>(max_super_freq) /
                             static_cast<double>(f.frequency);
    f.maximality = std::clamp(ratio, 0.0, 1.0);
  }
  return f;
}

double keyphraseness(const FeatureVector& features, const ScoringWeights& weights) {
  return weights.depth * features.depth + weights.lifespan * features.lifespan +
         weights.frequency * std::log(1.0 + static_cast<double>(features.frequency)) +
         weights.maximality * features.maximality;
}

KeyphraseSet select_keyphrases(const std::vector<Candidate>& candidates,
                               std::size_t token_stream_length,
                               const ScoringWeights& weights, Source source, int k) {
  if (k < 1) throw InvalidArgumentError("k must be >= 1");
  if (weights.depth <= 0.0 && weights.lifespan <= 0.0 && weights.frequency <= 0.0 &&
      weights.maximality <= 0.0) {
    throw InvalidArgumentError("at least one scoring weight must be positive");
  }
  KeyphraseSet set;
  if (candidates.empty()) return set;

  struct Scored {
    const Candidate* candidate;
    double score;
  };
  std::vector<Scored> scored[3];
  for (const Candidate& c : candidates) {
    FeatureVector f = compute_features(c, token_stream_length, candidates);
    scored[c.ngram - 1].push_back({&c, keyphraseness(f, weights)});
  }
  for (int cls = 0; cls < 3; ++cls) {
    auto& list = scored[cls];
    std::sort(list.begin(), list.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.candidate->occurrences.front() != b.candidate->occurrences.front()) {
        return a.candidate->occurrences.front() < b.candidate->occurrences.front();
      }
      return a.candidate->stems < b.candidate->stems;
    });
    if (list.size() > static_cast<std::size_t>(k)) list.resize(k);
    for (const Scored& s : list) {
      Keyphrase kp;
      kp.stems = s.candidate->stems;
      kp.ngram = s.candidate->ngram;
      kp.score = s.score;
      kp.source = source;
      kp.first_occurrence = s.candidate->occurrences.front();
      set.by_class[cls].push_back(std::move(kp));
    }
  }
  return set;
}

KeyphraseSet keyphrases_for_document(const corpus::Document& doc, Source source,
                                     const textpipe::Pipeline& pipeline,
                                     const ExtractionOptions& options) {
  if (doc.title.empty()) throw InvalidArgumentError("document title is empty");
  std::vector<std::string_view> parts{doc.title};
  if (source == Source::title_and_abstract) {
    if (!doc.has_abstract()) {
      throw InvalidArgumentError("source title_and_abstract requires an abstract");
    }
    parts.push_back(*doc.abstract);
  }
  textpipe::TokenStream stream = pipeline.run_parts(parts);
  if (stream.tokens.empty()) return {};
  auto candidates = extract_candidates(stream, options.patterns);
  return select_keyphrases(candidates, stream.tokens.size(),
                           options.weights_for(source), source, options.top_k);
}

KeyphraseStore KeyphraseStore::build(const corpus::DocumentStore& store,
                                     const textpipe::Pipeline& pipeline,
                                     const ExtractionOptions& options) {
  KeyphraseStore out;
  for (const corpus::Document* doc : store.all()) {
    if (!doc->language || *doc->language != "en") continue;
    out.put(doc->internal_id, Source::title_only,
            keyphrases_for_document(*doc, Source::title_only, pipeline, options));
    if (doc->has_abstract()) {
      out.put(doc->internal_id, Source::title_and_abstract,
              keyphrases_for_document(*doc, Source::title_and_abstract, pipeline,
                                      options));
    }
  }
  return out;
}

void KeyphraseStore::put(const std::string& internal_id, Source source,
                         KeyphraseSet set) {
  sets_[internal_id][source] = std::move(set);
}

const KeyphraseSet* KeyphraseStore::find(const std::string& internal_id,
                                         Source source) const {
  auto doc_it = sets_.find(internal_id);
  if (doc_it == sets_.end()) return nullptr;
  auto src_it = doc_it->second.find(source);
  return src_it == doc_it->second.end() ? nullptr : &src_it->second;
}

void KeyphraseStore::write_jsonl(const std::string& path, Source source,
                                 const corpus::DocumentStore& store) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgumentError("cannot write keyphrase file: " + path);
  for (const auto& [internal_id, by_source] : sets_) {
    auto it = by_source.find(source);
    if (it == by_source.end()) continue;
    const corpus::Document* doc = store.find_by_internal_id(internal_id);
    if (!doc) continue;
    for (int n = 1; n <= 3; ++n) {
      for (const Keyphrase& kp : it->second.ngram(n)) {
        nlohmann::json j;
        j["partner_id"] = doc->partner_id;
        j["source"] = source_name(source);
        j["ngram"] = kp.ngram;
        j["stems"] = kp.stems;
        j["score"] = kp.score;
        j["first_occurrence"] = kp.first_occurrence;
        out << j.dump() << '\n';
      }
    }
  }
}

void KeyphraseStore::load_jsonl(const std::string& path,
                                const corpus::DocumentStore& store) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open keyphrase file: " + path);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("keyphrase file: bad JSON", line_offset);
    const corpus::Document* doc =
        store.find_by_partner_id(j.at("partner_id").get<std::string>());
    if (!doc) continue;  // keyphrases for documents no longer in the store
    auto source = source_from_name(j.at("source").get<std::string>());
    if (!source) throw ParseError("keyphrase file: unknown source", line_offset);
    Keyphrase kp;
    kp.stems = j.at("stems").get<std::vector<std::string>>();
    kp.ngram = j.at("ngram").get<int>();
    kp.score = j.at("score").get<double>();
    kp.source = *source;
    kp.first_occurrence = j.value("first_occurrence", std::size_t{0});
    if (kp.ngram < 1 || kp.ngram > 3 ||
        kp.stems.size() != static_cast<std::size_t>(kp.ngram)) {
      throw ParseError("keyphrase file: ngram/stems mismatch", line_offset);
    }
    sets_[doc->internal_id][*source].ngram(kp.ngram).push_back(std::move(kp));
  }
  // per-class lists must stay in rank order regardless of row order on disk
  for (auto& [id, by_source] : sets_) {
    for (auto& [source, set] : by_source) {
      for (int n = 1; n <= 3; ++n) {
        auto& list = set.ngram(n);
        std::stable_sort(list.begin(), list.end(),
                         [](const Keyphrase& a, const Keyphrase& b) {
                           if (a.score != b.score) return a.score > b.score;
                           if (a.first_occurrence != b.first_occurrence) {
                             return a.first_occurrence < b.first_occurrence;
                           }
                           return a.stems < b.stems;
                         });
      }
    }
  }
}

std::map<std::string, std::vector<std::string>> KeyphraseStore::index_units() const {
  std::map<std::string, std::vector<std::string>> units;
  for (const auto& [internal_id, by_source] : sets_) {
    auto it = by_source.find(Source::title_and_abstract);
    if (it == by_source.end()) it = by_source.find(Source::title_only);
    if (it == by_source.end()) continue;
    std::vector<std::string> doc_units;
    for (int n = 1; n <= 3; ++n) {
      for (const Keyphrase& kp : it->second.ngram(n)) {
        doc_units.push_back(index::join_stems(kp.stems));
      }
    }
    if (!doc_units.empty()) units[internal_id] = std::move(doc_units);
  }
  return units;
}

std::size_t KeyphraseStore::document_count() const { return sets_.size(); }

}  // namespace litrec::keyphrase
