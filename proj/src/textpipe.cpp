#include "litrec/textpipe.hpp"

#include <cctype>
#include <fstream>

#include "litrec/config.hpp"
#include "litrec/errors.hpp"

namespace litrec::textpipe {

namespace {

constexpr char kReservedSeparator = 0x1f;  // keyphrase index join character

struct Codepoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

Codepoint decode_utf8(std::string_view text, std::size_t i) {
  unsigned char b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = (b0 >= 0xf0) ? 4 : (b0 >= 0xe0) ? 3 : (b0 >= 0xc0) ? 2 : 1;
  if (len == 1 || i + len > text.size()) return {0xfffd, 1};
  char32_t cp = b0 & (0x7f >> len);
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(text[i + k]);
    if ((bk & 0xc0) != 0x80) return {0xfffd, 1};
    cp = (cp << 6) | (bk & 0x3f);
  }
  return {cp, len};
}

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) {
    return std::isalnum(static_cast<unsigned char>(cp)) != 0;
  }
  // Non-ASCII is treated as letter material except common punctuation:
  // the General Punctuation block (dashes, curly quotes, ellipsis) and a
  // few Latin-1 marks.
  if (cp >= 0x2000 && cp <= 0x206f) return false;
  switch (cp) {
    case 0x00a0:  // no-break space
    case 0x00a1:
    case 0x00ab:
    case 0x00b7:
    case 0x00bb:
    case 0x00bf:
    case 0xfffd:
      return false;
    default:
      return true;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    Codepoint cp = decode_utf8(text, i);
    if (cp.value == '-') {
      // A hyphen joins only when flanked by word characters.
      bool next_is_word = false;
      if (i + 1 < text.size()) {
        Codepoint next = decode_utf8(text, i + 1);
        next_is_word = is_word_codepoint(next.value);
      }
      if (!current.empty() && next_is_word) {
        current.push_back('-');
      } else if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else if (cp.value != kReservedSeparator && is_word_codepoint(cp.value)) {
      current.append(text.substr(i, cp.length));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    i += cp.length;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

PosTagger::PosTagger(const std::string& lexicon_path) {
  std::ifstream in(lexicon_path);
  if (!in) {
    throw InvalidArgumentError("cannot open POS lexicon: " + lexicon_path);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    lexicon_[line.substr(0, tab)] = line.substr(tab + 1);
  }
  if (lexicon_.empty()) {
    throw InvalidArgumentError("POS lexicon is empty: " + lexicon_path);
  }
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool looks_numeric(std::string_view w) {
  bool digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-') {
      return false;
    }
  }
  return digit;
}

struct SuffixRule {
  std::string_view suffix;
  std::string_view tag;
};

// Longest suffix wins; a rule applies only when at least three characters
// precede the suffix.
constexpr SuffixRule kSuffixRules[] = {
    {"tion", "NN"}, {"sion", "NN"}, {"ment", "NN"}, {"ness", "NN"},
    {"ance", "NN"}, {"ence", "NN"}, {"ancy", "NN"}, {"ency", "NN"},
    {"ship", "NN"}, {"hood", "NN"}, {"less", "JJ"}, {"able", "JJ"},
    {"ible", "JJ"}, {"ity", "NN"},  {"ism", "NN"},  {"ist", "NN"},
    {"ogy", "NN"},  {"ure", "NN"},  {"ive", "JJ"},  {"ous", "JJ"},
    {"ful", "JJ"},  {"ish", "JJ"},  {"ary", "JJ"},  {"ing", "VBG"},
    {"ly", "RB"},   {"ed", "VBD"},  {"er", "NN"},   {"or", "NN"},
    {"ic", "JJ"},   {"al", "JJ"},
};

}  // namespace

std::string PosTagger::tag_word(std::string_view surface) const {
  std::string lw = ascii_lower(surface);
  if (looks_numeric(lw)) return "CD";

  auto hit = lexicon_.find(lw);
  if (hit != lexicon_.end()) return hit->second;

  // Plural reduction against the lexicon; plural nouns collapse to NN.
  auto reduced = [&](const std::string& base) -> std::string {
    auto it = lexicon_.find(base);
    if (it == lexicon_.end()) return "";
    if (it->second == "NN") return "NN";
    if (it->second == "VB") return "VBZ";
    return "";
  };
  if (lw.size() > 3 && lw.compare(lw.size() - 3, 3, "ies") == 0) {
    std::string tag = reduced(lw.substr(0, lw.size() - 3) + "y");
    if (!tag.empty()) return tag;
  }
  if (lw.size() > 2 && lw.back() == 's' && lw[lw.size() - 2] != 's') {
    if (lw.size() > 3 && lw.compare(lw.size() - 2, 2, "es") == 0) {
      std::string tag = reduced(lw.substr(0, lw.size() - 2));
      if (!tag.empty()) return tag;
    }
    std::string tag = reduced(lw.substr(0, lw.size() - 1));
    if (!tag.empty()) return tag;
  }

  for (const SuffixRule& rule : kSuffixRules) {
    if (lw.size() >= rule.suffix.size() + 3 &&
        lw.compare(lw.size() - rule.suffix.size(), rule.suffix.size(),
                   rule.suffix) == 0) {
      return std::string(rule.tag);
    }
  }
  return "NN";
}

std::vector<std::string> PosTagger::tag(
    const std::vector<std::string>& surfaces) const {
  std::vector<std::string> tags;
  tags.reserve(surfaces.size());
  for (const auto& s : surfaces) tags.push_back(tag_word(s));
  return tags;
}

StopwordSet::StopwordSet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open stopword list: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words_.insert(ascii_lower(line));
  }
}

bool StopwordSet::contains(std::string_view surface) const {
  return words_.count(ascii_lower(surface)) > 0;
}

void mark_stopwords(std::vector<Token>& tokens, const StopwordSet& stopwords) {
  for (Token& t : tokens) t.is_stopword = stopwords.contains(t.surface);
}

bool TokenStream::within_one_part(std::size_t start, std::size_t len) const {
  for (std::size_t k = 0; k + 1 < part_offsets.size(); ++k) {
    if (start >= part_offsets[k] && start + len <= part_offsets[k + 1]) {
      return true;
    }
  }
  return false;
}

std::vector<Token> Pipeline::run(std::string_view text) const {
  return run_parts({text}).tokens;
}

TokenStream Pipeline::run_parts(
    const std::vector<std::string_view>& parts) const {
  TokenStream stream;
  for (const auto& part : parts) {
    stream.part_offsets.push_back(stream.tokens.size());
    for (auto& surface : tokenize(part)) {
      Token t;
      t.position = stream.tokens.size();
      t.pos = tagger_->tag_word(surface);
      t.stem = porter_stem(surface);
      t.surface = std::move(surface);
      stream.tokens.push_back(std::move(t));
    }
  }
  stream.part_offsets.push_back(stream.tokens.size());
  mark_stopwords(stream.tokens, *stopwords_);
  return stream;
}

std::vector<std::string> Pipeline::index_terms(std::string_view text) const {
  std::vector<std::string> terms;
  for (auto& token : run(text)) {
    if (!token.is_stopword) terms.push_back(std::move(token.stem));
  }
  return terms;
}

std::string default_stopwords_path() {
  return default_data_dir() + "/stopwords_en.txt";
}

std::string default_lexicon_path() {
  return default_data_dir() + "/pos_lexicon.tsv";
}

}  // namespace litrec::textpipe
