#include <cctype>
#include <string>
#include <string_view>

#include "litrec/textpipe.hpp"

// Porter's 1980 suffix-stripping algorithm, original rule table (no later
// departures such as BLI->BLE or the LOGI rule).

namespace litrec::textpipe {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
  char c = w[i];
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in the [C](VC)^m[V] decomposition of the stem.
int measure(std::string_view w) {
  std::size_t i = 0;
  std::size_t n = w.size();
  int m = 0;
  while (i < n && is_consonant(w, i)) ++i;
  while (i < n) {
    while (i < n && !is_consonant(w, i)) ++i;
    if (i >= n) break;
    ++m;
    while (i < n && is_consonant(w, i)) ++i;
  }
  return m;
}

bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant and the final consonant is not
// w, x or y.
bool ends_cvc(std::string_view w) {
  std::size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) ||
      !is_consonant(w, n - 1)) {
    return false;
  }
  char c = w[n - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string_view stem_before(std::string_view w, std::string_view suffix) {
  return w.substr(0, w.size() - suffix.size());
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest matching suffix commits the rule; the replacement is applied only
// when measure(stem) > min_m. Rule tables are ordered longest-first.
template <std::size_t N>
bool apply_rules(std::string& w, const Rule (&rules)[N], int min_m) {
  for (const Rule& r : rules) {
    if (ends_with(w, r.suffix)) {
      std::string_view stem = stem_before(w, r.suffix);
      if (measure(stem) > min_m) {
        w.assign(stem);
        w.append(r.replacement);
      }
      return true;
    }
  }
  return false;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.erase(w.size() - 1);
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(stem_before(w, "eed")) > 0) w.erase(w.size() - 1);
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed") && has_vowel(stem_before(w, "ed"))) {
    w.erase(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "ing") && has_vowel(stem_before(w, "ing"))) {
    w.erase(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w)) {
    char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(stem_before(w, "y"))) {
    w.back() = 'i';
  }
}

void step2(std::string& w) {
  static const Rule rules[] = {
      {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"},
      {"fulness", "ful"}, {"ousness", "ous"}, {"tional", "tion"},
      {"biliti", "ble"},  {"entli", "ent"},   {"ousli", "ous"},
      {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
      {"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},
      {"ator", "ate"},    {"eli", "e"},
  };
  apply_rules(w, rules, 0);
}

void step3(std::string& w) {
  static const Rule rules[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ness", ""},  {"ful", ""},
  };
  apply_rules(w, rules, 0);
}

void step4(std::string& w) {
  static const Rule rules_before_ion[] = {
      {"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""}, {"ible", ""},
      {"ment", ""},  {"ant", ""},  {"ent", ""},
  };
  if (apply_rules(w, rules_before_ion, 1)) return;
  if (ends_with(w, "ion")) {
    std::string_view stem = stem_before(w, "ion");
    if (!stem.empty() && (stem.back() == 's' || stem.back() == 't') &&
        measure(stem) > 1) {
      w.erase(w.size() - 3);
    }
    return;
  }
  static const Rule rules_after_ion[] = {
      {"ism", ""}, {"ate", ""}, {"iti", ""}, {"ous", ""}, {"ive", ""},
      {"ize", ""}, {"al", ""},  {"er", ""},  {"ic", ""},  {"ou", ""},
  };
  apply_rules(w, rules_after_ion, 1);
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  std::string_view stem = stem_before(w, "e");
  int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (w.size() >= 2 && w.back() == 'l' && ends_double_consonant(w) &&
      measure(w) > 1) {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  bool pure_alpha = true;
  for (char c : word) {
    unsigned char uc = static_cast<unsigned char>(c);
    char lc = static_cast<char>(std::tolower(uc));
    if (lc < 'a' || lc > 'z') pure_alpha = false;
    w.push_back(lc);
  }
  if (!pure_alpha || w.size() <= 2) return w;

  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace litrec::textpipe
