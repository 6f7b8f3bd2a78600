// Exhaustive BM25 scorer used as the ranking oracle: no inverted index,
// no postings; term statistics are recomputed by scanning every document.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bm25_oracle {

struct Doc {
  std::string id;
  std::vector<std::string> terms;  // as indexed, duplicates included
};

struct Ranked {
  std::string id;
  double score;
};

inline std::vector<Ranked> rank(const std::vector<Doc>& docs,
                                const std::vector<std::string>& query_bag,
                                const std::string& exclude, std::size_t n) {
  const double k1 = 1.2;
  const double b = 0.75;
  double total_len = 0.0;
  for (const Doc& d : docs) total_len += static_cast<double>(d.terms.size());
  double avgdl = docs.empty() ? 0.0 : total_len / static_cast<double>(docs.size());
  auto count_in = [](const Doc& d, const std::string& term) {
    std::size_t c = 0;
    for (const auto& t : d.terms) {
      if (t == term) ++c;
    }
    return c;
  };

  std::vector<Ranked> out;
  for (const Doc& d : docs) {
    if (d.id == exclude) continue;
    double score = 0.0;
    for (const std::string& term : query_bag) {
      std::size_t tf = count_in(d, term);
      if (tf == 0) continue;
      std::size_t df = 0;
      for (const Doc& other : docs) {
        if (count_in(other, term) > 0) ++df;
      }
      double idf = std::log(1.0 + (static_cast<double>(docs.size()) -
                                   static_cast<double>(df) + 0.5) /
                                      (static_cast<double>(df) + 0.5));
      double dl = static_cast<double>(d.terms.size());
      double norm = avgdl > 0.0 ? dl / avgdl : 0.0;
      score += idf * (static_cast<double>(tf) * (k1 + 1.0)) /
               (static_cast<double>(tf) + k1 * (1.0 - b + b * norm));
    }
    if (score > 0.0) out.push_back({d.id, score});
  }
  std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& x) {
    if (a.score != x.score) return a.score > x.score;
    return a.id < x.id;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

}  // namespace bm25_oracle
