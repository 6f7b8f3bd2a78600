#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace litrec::textpipe {

/// One token of an analyzed stream. Positions are 0-based and consecutive;
/// stopword flagging never renumbers them.
struct Token {
  std::string surface;    // original text as it appeared
  std::string stem;       // lowercased, Porter-stemmed form
  std::string pos;        // Penn-style tag (NN, JJ, IN, ...)
  std::size_t position = 0;
  bool is_stopword = false;
};

/// Splits text on whitespace and punctuation. Intra-word hyphens are kept
/// ("state-of-the-art" is one token); standalone dashes and all other
/// punctuation are separators. No case folding happens here.
std::vector<std::string> tokenize(std::string_view text);

/// Porter (1980) stemmer over lowercase a-z words. Input is lowercased
/// first; words of length <= 2 or containing characters outside a-z are
/// returned lowercased but otherwise untouched.
std::string porter_stem(std::string_view word);

/// Deterministic tagger: lexicon lookup, then plural reduction against the
/// lexicon, then suffix rules, then NN. Plural nouns collapse to NN so that
/// noun patterns match singular and plural alike.
class PosTagger {
 public:
  /// Loads a tab-separated word<TAB>tag lexicon, one entry per line.
  explicit PosTagger(const std::string& lexicon_path);

  std::string tag_word(std::string_view surface) const;
  std::vector<std::string> tag(const std::vector<std::string>& surfaces) const;

  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, std::string> lexicon_;
};

/// Fixed stopword list, matched on the lowercased surface form.
class StopwordSet {
 public:
  explicit StopwordSet(const std::string& path);

  bool contains(std::string_view surface) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Flags stopword tokens in place; never deletes or renumbers them
/// (later positional features need the original positions).
void mark_stopwords(std::vector<Token>& tokens, const StopwordSet& stopwords);

/// Tokens of one or more text parts analyzed as a single stream.
/// part_offsets[i] is the position of the first token of part i; a final
/// sentinel equal to tokens.size() closes the last part.
struct TokenStream {
  std::vector<Token> tokens;
  std::vector<std::size_t> part_offsets;

  /// True when [start, start+len) lies entirely inside one part.
  bool within_one_part(std::size_t start, std::size_t len) const;
};

/// Bundles tokenizer, tagger, stopword list and stemmer into the analysis
/// chain shared by indexing and keyphrase extraction.
class Pipeline {
 public:
  Pipeline(const PosTagger* tagger, const StopwordSet* stopwords)
      : tagger_(tagger), stopwords_(stopwords) {}

  std::vector<Token> run(std::string_view text) const;
  TokenStream run_parts(const std::vector<std::string_view>& parts) const;

  /// Stopword-filtered stems of a text, in order — the unit the term
  /// index ingests.
  std::vector<std::string> index_terms(std::string_view text) const;

 private:
  const PosTagger* tagger_;
  const StopwordSet* stopwords_;
};

std::string default_stopwords_path();
std::string default_lexicon_path();

}  // namespace litrec::textpipe
