// Shared fixtures for the test binaries: pipeline construction over the
// shipped data files, synthetic corpora, and scratch directories.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "litrec/corpus.hpp"
#include "litrec/textpipe.hpp"

namespace testutil {

inline std::string test_dir() { return LITREC_TEST_DIR; }

struct PipelineFixture {
  litrec::textpipe::PosTagger tagger;
  litrec::textpipe::StopwordSet stopwords;
  litrec::textpipe::Pipeline pipeline;

  PipelineFixture()
      : tagger(litrec::textpipe::default_lexicon_path()),
        stopwords(litrec::textpipe::default_stopwords_path()),
        pipeline(&tagger, &stopwords) {}
};

inline const PipelineFixture& shared_pipeline() {
  static PipelineFixture fixture;
  return fixture;
}

/// Fresh scratch directory under /tmp, removed lazily by the OS.
inline std::string scratch_dir(const std::string& label) {
  std::string templ = "/tmp/litrec_" + label + "_XXXXXX";
  std::vector<char> buf(templ.begin(), templ.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  return std::string(buf.data());
}

/// Deterministic synthetic corpus. Titles and abstracts are drawn from a
/// vocabulary of nouns, adjectives and stopwords so POS patterns match on
/// a realistic fraction of windows.
struct CorpusSpec {
  std::size_t docs = 50;
  unsigned seed = 7;
  double english_fraction = 0.6;
  double abstract_fraction = 0.6;
  std::size_t title_min = 4, title_max = 10;
  std::size_t abstract_min = 15, abstract_max = 60;
};

inline litrec::corpus::DocumentStore make_corpus(const CorpusSpec& spec) {
  static const std::vector<std::string> nouns = {
      "system",   "model",    "network",  "algorithm", "analysis", "method",
      "approach", "document", "language", "index",     "search",   "query",
      "pattern",  "cluster",  "feature",  "score",     "ranking",  "paper",
      "research", "study",    "result",   "baseline",  "corpus",   "keyword",
      "user",     "click",    "rate",     "library",   "metadata", "recommendation",
  };
  static const std::vector<std::string> adjectives = {
      "quantitative", "statistical", "semantic", "random",   "novel",
      "effective",    "digital",     "relevant", "scalable", "empirical",
  };
  static const std::vector<std::string> fillers = {
      "of", "the", "for", "with", "a", "in", "on", "and",
  };
  static const std::vector<std::string> languages = {"de", "fr", "es"};

  std::mt19937_64 rng(spec.seed);
  auto pick = [&](const std::vector<std::string>& pool) -> const std::string& {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng)];
  };
  auto make_text = [&](std::size_t min_len, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::uniform_real_distribution<double> kind(0.0, 1.0);
    std::size_t len = len_dist(rng);
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      if (i > 0) text += ' ';
      double k = kind(rng);
      if (k < 0.55) {
        text += pick(nouns);
      } else if (k < 0.75) {
        text += pick(adjectives);
      } else {
        text += pick(fillers);
      }
    }
    return text;
  };

  std::ostringstream jsonl;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < spec.docs; ++i) {
    std::string language;
    double lu = u(rng);
    if (lu < spec.english_fraction) {
      language = "en";
    } else if (lu < spec.english_fraction + 0.25) {
      language = pick(languages);
    }  // else unspecified
    bool with_abstract = u(rng) < spec.abstract_fraction;

    jsonl << "{\"partner_id\":\"P" << 1000 + i << "\",\"title\":\""
          << make_text(spec.title_min, spec.title_max) << "\"";
    if (with_abstract) {
      jsonl << ",\"abstract\":\"" << make_text(spec.abstract_min, spec.abstract_max)
            << "\"";
    }
    if (!language.empty()) jsonl << ",\"language\":\"" << language << "\"";
    jsonl << ",\"authors\":[\"Author " << i << "\"],\"year\":" << 1990 + (i % 30)
          << "}\n";
  }
  litrec::corpus::DocumentStore store;
  std::istringstream in(jsonl.str());
  store.ingest(in, litrec::corpus::IngestFormat::jsonl);
  return store;
}

}  // namespace testutil
