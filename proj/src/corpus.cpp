#include "litrec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "litrec/errors.hpp"
#include "litrec/xml.hpp"

namespace litrec::corpus {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

const std::unordered_set<std::string>& iso639_1_codes() {
  static const std::unordered_set<std::string> codes = {
      "aa", "ab", "ae", "af", "ak", "am", "an", "ar", "as", "av", "ay", "az",
      "ba", "be", "bg", "bh", "bi", "bm", "bn", "bo", "br", "bs", "ca", "ce",
      "ch", "co", "cr", "cs", "cu", "cv", "cy", "da", "de", "dv", "dz", "ee",
      "el", "en", "eo", "es", "et", "eu", "fa", "ff", "fi", "fj", "fo", "fr",
      "fy", "ga", "gd", "gl", "gn", "gu", "gv", "ha", "he", "hi", "ho", "hr",
      "ht", "hu", "hy", "hz", "ia", "id", "ie", "ig", "ii", "ik", "io", "is",
      "it", "iu", "ja", "jv", "ka", "kg", "ki", "kj", "kk", "kl", "km", "kn",
      "ko", "kr", "ks", "ku", "kv", "kw", "ky", "la", "lb", "lg", "li", "ln",
      "lo", "lt", "lu", "lv", "mg", "mh", "mi", "mk", "ml", "mn", "mr", "ms",
      "mt", "my", "na", "nb", "nd", "ne", "ng", "nl", "nn", "no", "nr", "nv",
      "ny", "oc", "oj", "om", "or", "os", "pa", "pi", "pl", "ps", "pt", "qu",
      "rm", "rn", "ro", "ru", "rw", "sa", "sc", "sd", "se", "sg", "si", "sk",
      "sl", "sm", "sn", "so", "sq", "sr", "ss", "st", "su", "sv", "sw", "ta",
      "te", "tg", "th", "ti", "tk", "tl", "tn", "to", "tr", "ts", "tt", "tw",
      "ty", "ug", "uk", "ur", "uz", "ve", "vi", "vo", "wa", "wo", "xh", "yi",
      "yo", "za", "zh", "zu",
  };
  return codes;
}

json doc_to_json(const Document& d) {
  json j;
  j["internal_id"] = d.internal_id;
  j["partner_id"] = d.partner_id;
  j["title"] = d.title;
  j["authors"] = d.authors;
  if (d.abstract) j["abstract"] = *d.abstract;
  j["keywords"] = d.keywords;
  if (d.published_in) j["published_in"] = *d.published_in;
  if (d.language) j["language"] = *d.language;
  if (d.year) j["year"] = *d.year;
  if (d.doc_type) j["doc_type"] = *d.doc_type;
  return j;
}

Document doc_from_json(const json& j) {
  Document d;
  if (j.contains("internal_id")) d.internal_id = j.at("internal_id").get<std::string>();
  if (j.contains("partner_id")) d.partner_id = j.at("partner_id").get<std::string>();
  if (j.contains("title")) d.title = j.at("title").get<std::string>();
  if (j.contains("authors")) d.authors = j.at("authors").get<std::vector<std::string>>();
  if (j.contains("abstract") && !j.at("abstract").is_null()) {
    d.abstract = j.at("abstract").get<std::string>();
  }
  if (j.contains("keywords")) d.keywords = j.at("keywords").get<std::vector<std::string>>();
  if (j.contains("published_in") && !j.at("published_in").is_null()) {
    d.published_in = j.at("published_in").get<std::string>();
  }
  if (j.contains("language") && !j.at("language").is_null()) {
    d.language = j.at("language").get<std::string>();
  }
  if (j.contains("year") && !j.at("year").is_null()) {
    d.year = j.at("year").get<int>();
  }
  if (j.contains("doc_type") && !j.at("doc_type").is_null()) {
    d.doc_type = j.at("doc_type").get<std::string>();
  }
  return d;
}

std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

bool is_known_language_code(std::string_view code) {
  if (code.size() != 2) return false;
  std::string lower;
  lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(code[0]))));
  lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(code[1]))));
  return iso639_1_codes().count(lower) > 0;
}

DocumentStore DocumentStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open store file: " + path);
  DocumentStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw InvalidArgumentError("store file " + path + ": bad JSON on line " +
                                 std::to_string(lineno));
    }
    Document d = doc_from_json(j);
    store.partner_ids_[d.partner_id] = d.internal_id;
    // keep the id counter ahead of every loaded id
    if (d.internal_id.size() > 1 && d.internal_id[0] == 'd') {
      try {
        store.id_counter_ = std::max<std::uint64_t>(
            store.id_counter_, std::stoull(d.internal_id.substr(1)));
      } catch (const std::exception&) {
      }
    }
    store.documents_[d.internal_id] = std::move(d);
  }
  return store;
}

void DocumentStore::save(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot write store file: " + tmp);
    for (const auto& [id, doc] : documents_) {
      out << doc_to_json(doc).dump() << '\n';
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw InvalidArgumentError("cannot replace store file: " + path);
  }
}

DocumentStore::Validated DocumentStore::validate(Document&& raw) {
  Validated v;
  raw.partner_id = trim(raw.partner_id);
  raw.title = trim(raw.title);
  if (raw.partner_id.empty()) {
    v.reject_reason = "missing_partner_id";
    return v;
  }
  if (raw.title.empty()) {
    v.reject_reason = "missing_title";
    return v;
  }
  if (raw.language) {
    std::string lang = trim(*raw.language);
    if (lang.empty()) {
      raw.language.reset();
    } else if (!is_known_language_code(lang)) {
      v.reject_reason = "invalid_language";
      return v;
    } else {
      for (char& c : lang) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      raw.language = lang;
    }
  }
  v.doc = std::move(raw);
  return v;
}

void DocumentStore::upsert(Document&& doc) {
  auto it = partner_ids_.find(doc.partner_id);
  if (it != partner_ids_.end()) {
    doc.internal_id = it->second;  // replace in place, id is stable
  } else {
    doc.internal_id = next_internal_id();
    partner_ids_[doc.partner_id] = doc.internal_id;
  }
  documents_[doc.internal_id] = std::move(doc);
}

std::string DocumentStore::next_internal_id() {
  ++id_counter_;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "d%07llu",
                static_cast<unsigned long long>(id_counter_));
  return buf;
}

IngestReport DocumentStore::ingest(std::istream& source, IngestFormat format) {
  IngestReport report;
  auto account = [&](Document&& raw) {
    ++report.total_read;
    Validated v = validate(std::move(raw));
    if (!v.reject_reason.empty()) {
      ++report.rejected;
      ++report.rejects_by_reason[v.reject_reason];
      return;
    }
    ++report.accepted;
    auto& counts = report.per_language_counts[v.doc.language.value_or("unspecified")];
    ++counts.with_title;
    if (v.doc.has_abstract()) ++counts.with_abstract;
    upsert(std::move(v.doc));
  };

  std::string content = read_all(source);
  if (trim(content).empty()) return report;

  if (format == IngestFormat::xml) {
    xml::Node root = xml::parse(content);
    if (root.name != "documents") {
      throw ParseError("xml: expected root element <documents>, got <" + root.name + ">", 0);
    }
    for (const xml::Node& child : root.children) {
      if (child.name != "doc") continue;
      Document d;
      auto text_of = [&](const char* name) -> std::optional<std::string> {
        const xml::Node* n = child.child(name);
        if (!n) return std::nullopt;
        return trim(n->text);
      };
      d.partner_id = text_of("partner_id").value_or("");
      d.title = text_of("title").value_or("");
      for (const xml::Node* a : child.children_named("author")) {
        d.authors.push_back(trim(a->text));
      }
      d.abstract = text_of("abstract");
      for (const xml::Node* k : child.children_named("keyword")) {
        d.keywords.push_back(trim(k->text));
      }
      d.published_in = text_of("published_in");
      d.language = text_of("language");
      if (auto y = text_of("year"); y && !y->empty()) {
        try {
          d.year = std::stoi(*y);
        } catch (const std::exception&) {
          ++report.total_read;
          ++report.rejected;
          ++report.rejects_by_reason["invalid_year"];
          continue;
        }
      }
      d.doc_type = text_of("doc_type");
      account(std::move(d));
    }
  } else {
    std::size_t offset = 0;
    std::size_t line_start = 0;
    while (line_start < content.size()) {
      std::size_t nl = content.find('\n', line_start);
      std::size_t line_end = (nl == std::string::npos) ? content.size() : nl;
      std::string line = content.substr(line_start, line_end - line_start);
      offset = line_start;
      line_start = line_end + 1;
      if (trim(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw ParseError("jsonl: malformed record", offset);
      }
      Document d;
      try {
        d = doc_from_json(j);
      } catch (const json::exception& e) {
        throw ParseError(std::string("jsonl: bad field type: ") + e.what(), offset);
      }
      d.internal_id.clear();  // assigned by the store, never trusted from input
      account(std::move(d));
    }
  }
  return report;
}

const Document* DocumentStore::find_by_internal_id(std::string_view id) const {
  auto it = documents_.find(std::string(id));
  return it == documents_.end() ? nullptr : &it->second;
}

const Document* DocumentStore::find_by_partner_id(std::string_view id) const {
  auto it = partner_ids_.find(std::string(id));
  if (it == partner_ids_.end()) return nullptr;
  return find_by_internal_id(it->second);
}

const Document& DocumentStore::get(std::string_view id) const {
  if (const Document* d = find_by_internal_id(id)) return *d;
  if (const Document* d = find_by_partner_id(id)) return *d;
  throw NotFoundError("unknown document id: " + std::string(id));
}

std::map<std::string, LanguageCount> DocumentStore::language_stats() const {
  std::map<std::string, LanguageCount> stats;
  for (const auto& [id, doc] : documents_) {
    auto& row = stats[doc.language.value_or("unspecified")];
    ++row.with_title;
    if (doc.has_abstract()) ++row.with_abstract;
  }
  // the unspecified row is always reported for a non-empty store
  if (!documents_.empty()) stats["unspecified"];
  return stats;
}

std::vector<const Document*> DocumentStore::all() const {
  std::vector<const Document*> out;
  out.reserve(documents_.size());
  for (const auto& [id, doc] : documents_) out.push_back(&doc);
  return out;
}

}  // namespace litrec::corpus
