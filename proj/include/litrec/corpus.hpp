#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litrec::corpus {

/// Canonical metadata record: the unit of ingestion, indexing and
/// recommendation.
struct Document {
  std::string internal_id;   // assigned at ingest, stable across upserts
  std::string partner_id;    // the id partners use in API calls
  std::string title;         // non-empty after trimming
  std::vector<std::string> authors;
  std::optional<std::string> abstract;
  std::vector<std::string> keywords;
  std::optional<std::string> published_in;
  std::optional<std::string> language;  // ISO-639-1; absent = unspecified
  std::optional<int> year;
  std::optional<std::string> doc_type;

  bool has_abstract() const { return abstract && !abstract->empty(); }
};

struct LanguageCount {
  std::int64_t with_title = 0;
  std::int64_t with_abstract = 0;
};

struct IngestReport {
  std::int64_t total_read = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::map<std::string, std::int64_t> rejects_by_reason;
  // keyed by language code, "unspecified" for absent
  std::map<std::string, LanguageCount> per_language_counts;
};

enum class IngestFormat { xml, jsonl };

/// True for the 183 two-letter ISO-639-1 codes.
bool is_known_language_code(std::string_view code);

/// In-memory document store backed by a single JSONL file. Written
/// exclusively by ingest; immutable and freely shared once loaded.
class DocumentStore {
 public:
  DocumentStore() = default;

  static DocumentStore load(const std::string& path);
  void save(const std::string& path) const;

  /// Parses and validates records from the stream. Accepted records are
  /// upserted; records missing a partner_id or title are rejected and
  /// counted. A syntax error aborts with ParseError at the byte offset.
  IngestReport ingest(std::istream& source, IngestFormat format);

  const Document* find_by_internal_id(std::string_view id) const;
  const Document* find_by_partner_id(std::string_view id) const;
  /// Resolves either id form; throws NotFoundError when absent.
  const Document& get(std::string_view id) const;

  /// One row per distinct language plus "unspecified"; counts documents
  /// with a title and with an abstract.
  std::map<std::string, LanguageCount> language_stats() const;

  std::size_t size() const { return documents_.size(); }
  /// Documents in ascending internal_id order.
  std::vector<const Document*> all() const;

 private:
  struct Validated {
    Document doc;
    std::string reject_reason;  // empty = accepted
  };
  static Validated validate(Document&& raw);
  void upsert(Document&& doc);
  std::string next_internal_id();

  std::map<std::string, Document> documents_;      // internal_id -> doc
  std::map<std::string, std::string> partner_ids_; // partner_id -> internal_id
  std::uint64_t id_counter_ = 0;
};

}  // namespace litrec::corpus
