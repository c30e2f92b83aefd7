#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ranklab {

struct Document {
  std::string doc_id;
  std::string title;  // empty string means absent
  std::string text;
};

struct Query {
  std::string query_id;
  std::string text;
};

// Graded relevance judgments. Grades are non-negative; queries without
// judgments are simply absent.
class Qrels {
 public:
  using DocGrades = std::map<std::string, int>;

  // Returns true if the pair replaced an earlier judgment.
  bool add(const std::string& query_id, const std::string& doc_id, int grade);

  const DocGrades* find(const std::string& query_id) const;
  int grade(const std::string& query_id, const std::string& doc_id) const;
  bool has_positive(const std::string& query_id) const;

  const std::map<std::string, DocGrades>& judgments() const { return judgments_; }
  std::size_t query_count() const { return judgments_.size(); }

 private:
  std::map<std::string, DocGrades> judgments_;
};

// Immutable after load; safe for concurrent reads.
class Corpus {
 public:
  void add(Document doc);  // throws IntegrityError on duplicate id

  const Document& at(std::size_t ordinal) const { return docs_[ordinal]; }
  const Document* find(const std::string& doc_id) const;
  std::optional<std::int32_t> ordinal_of(const std::string& doc_id) const;

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const std::vector<Document>& docs() const { return docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::int32_t> by_id_;
};

struct Dataset {
  std::string name;
  std::string group;
  Corpus corpus;
  std::vector<Query> queries;
  Qrels qrels;
};

// BEIR-style JSONL corpus: one object per line with _id, optional title, text.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// JSONL queries: _id, text.
std::vector<Query> load_queries(const std::filesystem::path& path);
void save_queries(const std::vector<Query>& queries, const std::filesystem::path& path);

// TSV qrels with header row: query-id, corpus-id, score. Duplicate
// (query, doc) rows resolve last-write-wins with a warning on stderr.
Qrels load_qrels(const std::filesystem::path& path);
void save_qrels(const Qrels& qrels, const std::filesystem::path& path);

// Keeps the first min(limit, n) queries in file order; everything else is
// shared with the input dataset.
Dataset cap_queries(Dataset dataset, std::size_t limit);

// Checks cross-references: every judged doc_id exists in the corpus, every
// judged query_id exists in the query list. Throws IntegrityError.
void validate_dataset(const Dataset& dataset);

}  // namespace ranklab
