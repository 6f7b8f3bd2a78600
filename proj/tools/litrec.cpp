// litrec: content-based research-paper recommender with weighted A/B
// experiment routing and CTR analytics over its own delivery logs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "litrec/analytics.hpp"
#include "litrec/config.hpp"
#include "litrec/corpus.hpp"
#include "litrec/errors.hpp"
#include "litrec/index.hpp"
#include "litrec/keyphrase.hpp"
#include "litrec/logs.hpp"
#include "litrec/recsys.hpp"
#include "litrec/service.hpp"
#include "litrec/textpipe.hpp"

namespace {

using namespace litrec;

textpipe::Pipeline make_pipeline(const KeyValueConfig& cfg,
                                 std::unique_ptr<textpipe::PosTagger>& tagger,
                                 std::unique_ptr<textpipe::StopwordSet>& stopwords) {
  tagger = std::make_unique<textpipe::PosTagger>(
      cfg.get_or("lexicon", textpipe::default_lexicon_path()));
  stopwords = std::make_unique<textpipe::StopwordSet>(
      cfg.get_or("stopwords", textpipe::default_stopwords_path()));
  return textpipe::Pipeline(tagger.get(), stopwords.get());
}

/// Everything a serving or offline-recommend run needs, built from one
/// config file. Keyphrases come from the configured JSONL files when
/// present, otherwise they are extracted from the store at startup.
struct Runtime {
  KeyValueConfig cfg;
  corpus::DocumentStore store;
  std::unique_ptr<textpipe::PosTagger> tagger;
  std::unique_ptr<textpipe::StopwordSet> stopwords;
  std::unique_ptr<textpipe::Pipeline> pipeline;
  keyphrase::KeyphraseStore kp_store;
  index::InvertedIndex term_index;
  index::InvertedIndex kp_index;
  std::unique_ptr<recsys::Engines> engines;

  static std::unique_ptr<Runtime> load(const std::string& config_path) {
    auto rt = std::make_unique<Runtime>();
    rt->cfg = KeyValueConfig::parse_file(config_path);
    rt->store = corpus::DocumentStore::load(rt->cfg.require("store"));
    rt->pipeline = std::make_unique<textpipe::Pipeline>(
        make_pipeline(rt->cfg, rt->tagger, rt->stopwords));

    auto kp_options = keyphrase::ExtractionOptions::from_config(rt->cfg);
    bool loaded_any = false;
    for (const char* key : {"keyphrases.title_only", "keyphrases.title_and_abstract"}) {
      if (auto path = rt->cfg.get(key)) {
        rt->kp_store.load_jsonl(*path, rt->store);
        loaded_any = true;
      }
    }
    if (!loaded_any) {
      rt->kp_store = keyphrase::KeyphraseStore::build(rt->store, *rt->pipeline,
                                                      kp_options);
    }

    rt->term_index = index::build_term_index(rt->store, *rt->pipeline);
    rt->kp_index = index::build_keyphrase_index(rt->kp_store.index_units());
    rt->engines = std::make_unique<recsys::Engines>(
        &rt->store, &rt->term_index, &rt->kp_index, &rt->kp_store,
        recsys::ExperimentConfig::from_config(rt->cfg));
    return rt;
  }
};

int cmd_ingest(const std::string& format, const std::string& input,
               const std::string& store_path) {
  corpus::IngestFormat fmt;
  if (format == "xml") {
    fmt = corpus::IngestFormat::xml;
  } else if (format == "jsonl") {
    fmt = corpus::IngestFormat::jsonl;
  } else {
    std::cerr << "litrec ingest: --format must be xml or jsonl\n";
    return 2;
  }
  corpus::DocumentStore store;
  std::ifstream probe(store_path);
  if (probe.good()) store = corpus::DocumentStore::load(store_path);
  probe.close();

  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "litrec ingest: cannot open input: " << input << "\n";
    return 2;
  }
  corpus::IngestReport report = store.ingest(in, fmt);
  store.save(store_path);

  nlohmann::json j;
  j["total_read"] = report.total_read;
  j["accepted"] = report.accepted;
  j["rejected"] = report.rejected;
  j["rejects_by_reason"] = report.rejects_by_reason;
  nlohmann::json langs = nlohmann::json::object();
  for (const auto& [lang, counts] : report.per_language_counts) {
    langs[lang] = {{"title", counts.with_title}, {"abstract", counts.with_abstract}};
  }
  j["per_language_counts"] = std::move(langs);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_index(const std::string& store_path, const std::string& out_path,
              const std::string& config_path) {
  KeyValueConfig cfg;
  if (!config_path.empty()) cfg = KeyValueConfig::parse_file(config_path);
  corpus::DocumentStore store = corpus::DocumentStore::load(store_path);
  std::unique_ptr<textpipe::PosTagger> tagger;
  std::unique_ptr<textpipe::StopwordSet> stopwords;
  textpipe::Pipeline pipeline = make_pipeline(cfg, tagger, stopwords);
  index::InvertedIndex idx = index::build_term_index(store, pipeline);
  idx.save(out_path);
  std::cout << "indexed " << idx.doc_count() << " documents ("
            << idx.postings().size() << " terms) -> " << out_path << "\n";
  return 0;
}

int cmd_keyphrases(const std::string& store_path, const std::string& source_name,
                   const std::string& out_path, const std::string& config_path) {
  keyphrase::Source source;
  if (source_name == "title") {
    source = keyphrase::Source::title_only;
  } else if (source_name == "title_abstract") {
    source = keyphrase::Source::title_and_abstract;
  } else {
    std::cerr << "litrec keyphrases: --source must be title or title_abstract\n";
    return 2;
  }
  KeyValueConfig cfg;
  if (!config_path.empty()) cfg = KeyValueConfig::parse_file(config_path);
  corpus::DocumentStore store = corpus::DocumentStore::load(store_path);
  std::unique_ptr<textpipe::PosTagger> tagger;
  std::unique_ptr<textpipe::StopwordSet> stopwords;
  textpipe::Pipeline pipeline = make_pipeline(cfg, tagger, stopwords);
  auto options = keyphrase::ExtractionOptions::from_config(cfg);
  keyphrase::KeyphraseStore kp =
      keyphrase::KeyphraseStore::build(store, pipeline, options);
  kp.write_jsonl(out_path, source, store);
  std::cout << "keyphrases for " << kp.document_count() << " documents -> "
            << out_path << "\n";
  return 0;
}

int cmd_recommend(const std::string& config_path, const std::string& partner_id,
                  const std::string& forced_algorithm, std::uint64_t seed) {
  auto rt = Runtime::load(config_path);
  const corpus::Document* doc = rt->store.find_by_partner_id(partner_id);
  if (!doc) {
    std::cerr << "litrec recommend: unknown document: " << partner_id << "\n";
    return 1;
  }
  recsys::Rng rng(seed);
  recsys::AlgorithmChoice choice;
  if (forced_algorithm.empty()) {
    choice = recsys::choose_algorithm(*doc, rt->engines->config(), rng);
  } else {
    auto algorithm = recsys::algorithm_from_name(forced_algorithm);
    if (!algorithm) {
      std::cerr << "litrec recommend: unknown algorithm: " << forced_algorithm << "\n";
      return 2;
    }
    choice.algorithm = *algorithm;
    if (choice.algorithm == recsys::Algorithm::random) {
      choice.random_language_filter = false;
    } else if (choice.algorithm == recsys::Algorithm::keyphrase) {
      std::vector<keyphrase::Source> sources{keyphrase::Source::title_only};
      if (doc->has_abstract()) sources.push_back(keyphrase::Source::title_and_abstract);
      choice.keyphrase_variant = recsys::sample_keyphrase_variant(
          rng, sources, rt->engines->config().keyphrase_max_count);
    }
  }
  auto [items, fallback_used] = rt->engines->recommend_with_fallback(
      *doc, choice, rt->engines->config().set_size, rng);

  nlohmann::json j;
  j["requested_partner_id"] = partner_id;
  j["algorithm"] = recsys::algorithm_name(choice.algorithm);
  j["fallback_used"] = fallback_used;
  if (choice.keyphrase_variant) {
    j["variant"] = {{"source", keyphrase::source_name(choice.keyphrase_variant->source)},
                    {"ngram_combo", choice.keyphrase_variant->ngram_combo},
                    {"count", choice.keyphrase_variant->count}};
  }
  nlohmann::json out_items = nlohmann::json::array();
  int rank = 0;
  for (const auto& item : items) {
    const corpus::Document* rec = rt->store.find_by_internal_id(item.internal_id);
    nlohmann::json row;
    row["rank"] = ++rank;
    row["partner_id"] = rec ? rec->partner_id : item.internal_id;
    row["title"] = rec ? rec->title : "";
    if (item.score) row["score"] = *item.score;
    out_items.push_back(std::move(row));
  }
  j["items"] = std::move(out_items);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_serve(const std::string& config_path, int port) {
  auto rt = Runtime::load(config_path);

  std::string log_dir = rt->cfg.get_or("log_dir", ".");
  if (const char* env = std::getenv("LITREC_LOG_DIR")) log_dir = env;
  if (port == 0) port = static_cast<int>(rt->cfg.get_long("port", 8080));
  if (const char* env = std::getenv("LITREC_PORT")) port = std::atoi(env);

  service::ServiceOptions options;
  options.delivery_log_path = log_dir + "/deliveries.jsonl";
  options.click_log_path = log_dir + "/clicks.jsonl";
  options.landing_url_template =
      rt->cfg.get_or("landing_url_template", options.landing_url_template);
  options.base_url =
      rt->cfg.get_or("base_url", "http://localhost:" + std::to_string(port));
  options.seed = static_cast<std::uint64_t>(rt->cfg.get_long("seed", 1));

  service::RecommenderService svc(rt->engines.get(), options);
  return service::run_http_server(svc, rt->cfg.get_or("host", "0.0.0.0"), port);
}

int cmd_analyze(const std::string& deliveries, const std::string& clicks,
                const std::string& by, const std::string& test,
                const std::string& csv_path, const std::string& plot_path) {
  auto dimension = analytics::dimension_from_name(by);
  if (!dimension) {
    std::cerr << "litrec analyze: unknown dimension: " << by << "\n";
    return 2;
  }
  analytics::ReportSpec spec;
  spec.dimension = *dimension;
  if (!test.empty()) {
    auto comma = test.find(',');
    if (comma == std::string::npos) {
      std::cerr << "litrec analyze: --test expects A,B\n";
      return 2;
    }
    spec.tests.emplace_back(test.substr(0, comma), test.substr(comma + 1));
  }
  analytics::Logs logs = analytics::Logs::load(deliveries, clicks);
  analytics::Report report = analytics::run_report(logs, spec);
  std::cout << report.table;
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::trunc);
    out << report.csv;
  }
  if (!plot_path.empty()) {
    std::ofstream out(plot_path, std::ios::trunc);
    out << report.plot_data;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"litrec: related-document recommendation service and analytics"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "import partner metadata into the store");
  std::string ingest_format, ingest_input, ingest_store;
  ingest->add_option("--format", ingest_format, "xml or jsonl")->required();
  ingest->add_option("--input", ingest_input, "input file")->required();
  ingest->add_option("--store", ingest_store, "store file (created or updated)")->required();

  auto* index_cmd = app.add_subcommand("index", "build and snapshot the term index");
  std::string index_store, index_out, index_config;
  index_cmd->add_option("--store", index_store)->required();
  index_cmd->add_option("--out", index_out)->required();
  index_cmd->add_option("--config", index_config, "optional config for data paths");

  auto* kp_cmd = app.add_subcommand("keyphrases", "extract keyphrases to JSONL");
  std::string kp_store, kp_source, kp_out, kp_config;
  kp_cmd->add_option("--store", kp_store)->required();
  kp_cmd->add_option("--source", kp_source, "title or title_abstract")->required();
  kp_cmd->add_option("--out", kp_out)->required();
  kp_cmd->add_option("--config", kp_config, "optional config for weights/patterns");

  auto* rec_cmd = app.add_subcommand("recommend", "offline recommendations for one document");
  std::string rec_config, rec_doc, rec_algorithm;
  std::uint64_t rec_seed = 1;
  rec_cmd->add_option("--config", rec_config)->required();
  rec_cmd->add_option("--doc", rec_doc, "partner document id")->required();
  rec_cmd->add_option("--algorithm", rec_algorithm, "force one algorithm");
  rec_cmd->add_option("--seed", rec_seed, "RNG seed");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  std::string serve_config;
  int serve_port = 0;
  serve_cmd->add_option("--config", serve_config)->required();
  serve_cmd->add_option("--port", serve_port, "overrides config; env LITREC_PORT wins");

  auto* an_cmd = app.add_subcommand("analyze", "CTR analytics over exported logs");
  std::string an_deliveries, an_clicks, an_by = "algorithm", an_test, an_csv, an_plot;
  an_cmd->add_option("--deliveries", an_deliveries)->required();
  an_cmd->add_option("--clicks", an_clicks)->required();
  an_cmd->add_option("--by", an_by,
                     "algorithm|algorithm_detail|language|ngram|kpcount|source|fallback");
  an_cmd->add_option("--test", an_test, "pairwise significance test: groupA,groupB");
  an_cmd->add_option("--csv", an_csv, "write machine-readable rows here");
  an_cmd->add_option("--plot-data", an_plot, "write plot data CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(ingest_format, ingest_input, ingest_store);
    if (index_cmd->parsed()) return cmd_index(index_store, index_out, index_config);
    if (kp_cmd->parsed()) return cmd_keyphrases(kp_store, kp_source, kp_out, kp_config);
    if (rec_cmd->parsed()) return cmd_recommend(rec_config, rec_doc, rec_algorithm, rec_seed);
    if (serve_cmd->parsed()) return cmd_serve(serve_config, serve_port);
    if (an_cmd->parsed()) return cmd_analyze(an_deliveries, an_clicks, an_by, an_test, an_csv, an_plot);
  } catch (const litrec::ParseError& e) {
    std::cerr << "litrec: parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "litrec: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
