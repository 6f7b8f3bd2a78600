// Regenerates fixtures/porter_pairs.tsv: every vocabulary word with the
// stem the oracle assigns it. Run from anywhere; paths are compiled in.
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "porter_oracle.hpp"

int main() {
  std::string dir = LITREC_TEST_DIR;
  std::ifstream in(dir + "/fixtures/porter_vocabulary.txt");
  if (!in) {
    std::cerr << "cannot open porter_vocabulary.txt\n";
    return 1;
  }
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::string word;
    std::istringstream split(line);
    while (split >> word) words.insert(word);
  }
  std::ofstream out(dir + "/fixtures/porter_pairs.tsv");
  for (const auto& word : words) {
    out << word << '\t' << porter_oracle::stem(word) << '\n';
  }
  std::cout << "wrote " << words.size() << " pairs\n";
  return 0;
}
