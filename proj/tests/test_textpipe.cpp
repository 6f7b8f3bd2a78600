#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include "helpers.hpp"
#include "litrec/textpipe.hpp"
#include "porter_oracle.hpp"

using namespace litrec::textpipe;

namespace {
const char* kExampleTitle =
    "Research Paper Recommender Systems – A quantitative study of performance";
}

TEST_CASE("tokenize: empty and whitespace") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n").empty());
}

TEST_CASE("tokenize: punctuation splits, dash dropped") {
  auto tokens = tokenize(kExampleTitle);
  std::vector<std::string> expected = {"Research", "Paper",        "Recommender",
                                       "Systems",  "A",            "quantitative",
                                       "study",    "of",           "performance"};
  CHECK(tokens == expected);
}

TEST_CASE("tokenize: intra-word hyphens survive") {
  CHECK(tokenize("state-of-the-art") == std::vector<std::string>{"state-of-the-art"});
  CHECK(tokenize("pre- and post-processing") ==
        std::vector<std::string>{"pre", "and", "post-processing"});
  CHECK(tokenize("a - b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize: numbers, unicode words, reserved separator") {
  CHECK(tokenize("BM25 scoring") == std::vector<std::string>{"BM25", "scoring"});
  CHECK(tokenize("über Bücher") ==
        std::vector<std::string>{"über", "Bücher"});
  CHECK(tokenize(std::string("a\x1f") + "b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don", "t", "stop"});
}

TEST_CASE("tokenize: order is preserved") {
  auto tokens = tokenize("alpha, beta; gamma. alpha");
  CHECK(tokens == std::vector<std::string>{"alpha", "beta", "gamma", "alpha"});
}

TEST_CASE("porter: canonical pairs") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("systems") == "system");
  CHECK(porter_stem("cats") == "cat");
  CHECK(porter_stem("caress") == "caress");
}

TEST_CASE("porter: published rule examples") {
  // step 1
  CHECK(porter_stem("feed") == "feed");
  CHECK(porter_stem("agreed") == "agre");
  CHECK(porter_stem("plastered") == "plaster");
  CHECK(porter_stem("bled") == "bled");
  CHECK(porter_stem("motoring") == "motor");
  CHECK(porter_stem("sing") == "sing");
  CHECK(porter_stem("conflated") == "conflat");
  CHECK(porter_stem("troubled") == "troubl");
  CHECK(porter_stem("sized") == "size");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("tanned") == "tan");
  CHECK(porter_stem("falling") == "fall");
  CHECK(porter_stem("hissing") == "hiss");
  CHECK(porter_stem("fizzed") == "fizz");
  CHECK(porter_stem("failing") == "fail");
  CHECK(porter_stem("filing") == "file");
  CHECK(porter_stem("happy") == "happi");
  CHECK(porter_stem("sky") == "sky");
  // steps 2-4 reached through real words
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("conditional") == "condit");
  CHECK(porter_stem("rational") == "ration");
  CHECK(porter_stem("digitizer") == "digit");
  CHECK(porter_stem("operator") == "oper");
  CHECK(porter_stem("feudalism") == "feudal");
  CHECK(porter_stem("decisiveness") == "decis");
  CHECK(porter_stem("hopefulness") == "hope");
  CHECK(porter_stem("callousness") == "callous");
  CHECK(porter_stem("formality") == "formal");
  CHECK(porter_stem("sensitivity") == "sensit");
  CHECK(porter_stem("sensibility") == "sensibl");
  CHECK(porter_stem("triplicate") == "triplic");
  CHECK(porter_stem("formative") == "form");
  CHECK(porter_stem("formalize") == "formal");
  CHECK(porter_stem("electricity") == "electr");
  CHECK(porter_stem("electrical") == "electr");
  CHECK(porter_stem("hopeful") == "hope");
  CHECK(porter_stem("goodness") == "good");
  CHECK(porter_stem("revival") == "reviv");
  CHECK(porter_stem("allowance") == "allow");
  CHECK(porter_stem("inference") == "infer");
  CHECK(porter_stem("airliner") == "airlin");
  CHECK(porter_stem("gyroscopic") == "gyroscop");
  CHECK(porter_stem("adjustable") == "adjust");
  CHECK(porter_stem("defensible") == "defens");
  CHECK(porter_stem("irritant") == "irrit");
  CHECK(porter_stem("replacement") == "replac");
  CHECK(porter_stem("adjustment") == "adjust");
  CHECK(porter_stem("dependent") == "depend");
  CHECK(porter_stem("adoption") == "adopt");
  CHECK(porter_stem("communism") == "commun");
  CHECK(porter_stem("activate") == "activ");
  CHECK(porter_stem("angularity") == "angular");
  CHECK(porter_stem("homologous") == "homolog");
  CHECK(porter_stem("effective") == "effect");
  CHECK(porter_stem("bowdlerize") == "bowdler");
  // step 5
  CHECK(porter_stem("probate") == "probat");
  CHECK(porter_stem("rate") == "rate");
  CHECK(porter_stem("cease") == "ceas");
  CHECK(porter_stem("controlling") == "control");
  CHECK(porter_stem("rolled") == "roll");
}

TEST_CASE("porter: short words, case folding, non-alpha") {
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("at") == "at");
  CHECK(porter_stem("PONIES") == "poni");
  CHECK(porter_stem("888") == "888");
  CHECK(porter_stem("abc123") == "abc123");
  CHECK(porter_stem("state-of-the-art") == "state-of-the-art");
}

TEST_CASE("porter: fixture agreement and idempotence") {
  std::ifstream in(testutil::test_dir() + "/fixtures/porter_pairs.tsv");
  REQUIRE(in.good());
  std::size_t total = 0, agree = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    std::string word = line.substr(0, tab);
    std::string expected = line.substr(tab + 1);
    ++total;
    std::string got = porter_stem(word);
    if (got == expected) ++agree;
    CHECK(porter_stem(got) == got);  // stems are fixed points
  }
  CHECK(total >= 1000);
  CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(total));
}

TEST_CASE("porter: matches the oracle on the whole vocabulary") {
  std::ifstream in(testutil::test_dir() + "/fixtures/porter_vocabulary.txt");
  REQUIRE(in.good());
  std::string line, word;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream split(line);
    while (split >> word) {
      CAPTURE(word);
      CHECK(porter_stem(word) == porter_oracle::stem(word));
    }
  }
}

TEST_CASE("tagger: example title tags") {
  const auto& fx = testutil::shared_pipeline();
  CHECK(fx.tagger.tag_word("quantitative") == "JJ");
  CHECK(fx.tagger.tag_word("study") == "NN");
  CHECK(fx.tagger.tag_word("of") == "IN");
  CHECK(fx.tagger.tag_word("performance") == "NN");
  CHECK(fx.tagger.tag_word("Research") == "NN");
  CHECK(fx.tagger.tag_word("Recommender") == "NN");  // unknown, -er rule
  CHECK(fx.tagger.tag_word("Systems") == "NN");      // plural reduction
}

TEST_CASE("tagger: unknown words default NN; output length matches input") {
  const auto& fx = testutil::shared_pipeline();
  CHECK(fx.tagger.tag_word("xqzzt") == "NN");
  CHECK(fx.tagger.tag({}).empty());
  std::vector<std::string> words = {"The", "cat", "sat", "quickly", "1999"};
  auto tags = fx.tagger.tag(words);
  REQUIRE(tags.size() == words.size());
  CHECK(tags[0] == "DT");
  CHECK(tags[3] == "RB");
  CHECK(tags[4] == "CD");
}

TEST_CASE("tagger: every tag is non-empty and deterministic") {
  const auto& fx = testutil::shared_pipeline();
  for (const char* w : {"alpha", "Beta-test", "running", "905", "Zzz", "flux"}) {
    auto t1 = fx.tagger.tag_word(w);
    auto t2 = fx.tagger.tag_word(w);
    CHECK(t1 == t2);
    CHECK(!t1.empty());
  }
}

TEST_CASE("stopwords: flagging without deletion") {
  const auto& fx = testutil::shared_pipeline();
  CHECK(fx.stopwords.contains("of"));
  CHECK(fx.stopwords.contains("OF"));
  CHECK(!fx.stopwords.contains("performance"));

  auto tokens = fx.pipeline.run(kExampleTitle);
  REQUIRE(tokens.size() == 9);
  std::size_t flagged = 0, content = 0;
  for (const auto& t : tokens) {
    (t.is_stopword ? flagged : content)++;
  }
  CHECK(flagged == 2);  // "A" and "of"
  CHECK(content == 7);
  CHECK(tokens[4].is_stopword);
  CHECK(tokens[7].is_stopword);
}

TEST_CASE("stopwords: all-stopword input flags everything") {
  const auto& fx = testutil::shared_pipeline();
  auto tokens = fx.pipeline.run("the of a");
  REQUIRE(tokens.size() == 3);
  for (const auto& t : tokens) CHECK(t.is_stopword);
}

TEST_CASE("pipeline: positions are consecutive from zero") {
  const auto& fx = testutil::shared_pipeline();
  auto tokens = fx.pipeline.run("one two three of four");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    CHECK(tokens[i].position == i);
  }
}

TEST_CASE("pipeline: stems are lowercase and non-empty for lettered tokens") {
  const auto& fx = testutil::shared_pipeline();
  auto tokens = fx.pipeline.run("Research Papers 2021 Recommender-Systems");
  for (const auto& t : tokens) {
    CHECK(!t.stem.empty());
    for (char c : t.stem) {
      CHECK(!(c >= 'A' && c <= 'Z'));
    }
  }
}

TEST_CASE("pipeline: multi-part streams record boundaries") {
  const auto& fx = testutil::shared_pipeline();
  auto stream = fx.pipeline.run_parts({"alpha beta", "gamma delta epsilon"});
  REQUIRE(stream.tokens.size() == 5);
  REQUIRE(stream.part_offsets == std::vector<std::size_t>{0, 2, 5});
  CHECK(stream.within_one_part(0, 2));
  CHECK(stream.within_one_part(2, 3));
  CHECK(!stream.within_one_part(1, 2));  // spans the boundary
}

TEST_CASE("pipeline: index terms drop stopwords and stem the rest") {
  const auto& fx = testutil::shared_pipeline();
  auto terms = fx.pipeline.index_terms("The performance of systems");
  CHECK(terms == std::vector<std::string>{"perform", "system"});
}

TEST_CASE("mark_stopwords keeps stream length") {
  const auto& fx = testutil::shared_pipeline();
  auto tokens = fx.pipeline.run("a study of the art of war");
  auto before = tokens.size();
  mark_stopwords(tokens, fx.stopwords);
  CHECK(tokens.size() == before);
}
