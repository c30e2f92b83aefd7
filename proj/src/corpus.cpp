#include "ranklab/corpus.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ranklab/types.hpp"

namespace ranklab {

using nlohmann::json;

bool Qrels::add(const std::string& query_id, const std::string& doc_id, int grade) {
  if (grade < 0) {
    throw IntegrityError("negative relevance grade for query '" + query_id + "', doc '" +
                         doc_id + "'");
  }
  auto& per_query = judgments_[query_id];
  const bool replaced = per_query.count(doc_id) > 0;
  per_query[doc_id] = grade;
  return replaced;
}

const Qrels::DocGrades* Qrels::find(const std::string& query_id) const {
  const auto it = judgments_.find(query_id);
  return it == judgments_.end() ? nullptr : &it->second;
}

int Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
  if (const auto* docs = find(query_id)) {
    const auto it = docs->find(doc_id);
    if (it != docs->end()) return it->second;
  }
  return 0;
}

bool Qrels::has_positive(const std::string& query_id) const {
  const auto* docs = find(query_id);
  if (docs == nullptr) return false;
  for (const auto& [doc, grade] : *docs) {
    if (grade > 0) return true;
  }
  return false;
}

void Corpus::add(Document doc) {
  if (doc.doc_id.empty()) throw IntegrityError("document with empty _id");
  if (doc.text.empty() && doc.title.empty()) {
    throw IntegrityError("document '" + doc.doc_id + "' has neither title nor text");
  }
  const auto ordinal = static_cast<std::int32_t>(docs_.size());
  if (!by_id_.emplace(doc.doc_id, ordinal).second) {
    throw IntegrityError("duplicate document _id '" + doc.doc_id + "'");
  }
  docs_.push_back(std::move(doc));
}

const Document* Corpus::find(const std::string& doc_id) const {
  const auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[static_cast<std::size_t>(it->second)];
}

std::optional<std::int32_t> Corpus::ordinal_of(const std::string& doc_id) const {
  const auto it = by_id_.find(doc_id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

json parse_line(const std::string& line, const std::filesystem::path& path, std::size_t lineno) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed JSON line");
  }
  return obj;
}

std::string require_string(const json& obj, const char* key, const std::filesystem::path& path,
                           std::size_t lineno) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": missing string field '" +
                     key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json obj = parse_line(line, path, lineno);
    Document doc;
    doc.doc_id = require_string(obj, "_id", path, lineno);
    doc.text = require_string(obj, "text", path, lineno);
    if (const auto it = obj.find("title"); it != obj.end() && it->is_string()) {
      doc.title = it->get<std::string>();
    }
    corpus.add(std::move(doc));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& doc : corpus.docs()) {
    json obj;
    obj["_id"] = doc.doc_id;
    if (!doc.title.empty()) obj["title"] = doc.title;
    obj["text"] = doc.text;
    out << obj.dump() << '\n';
  }
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<Query> queries;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json obj = parse_line(line, path, lineno);
    Query q;
    q.query_id = require_string(obj, "_id", path, lineno);
    q.text = require_string(obj, "text", path, lineno);
    if (q.query_id.empty()) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineno) + ": empty query _id");
    }
    if (!seen.insert(q.query_id).second) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineno) +
                           ": duplicate query _id '" + q.query_id + "'");
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

void save_queries(const std::vector<Query>& queries, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& q : queries) {
    json obj;
    obj["_id"] = q.query_id;
    obj["text"] = q.text;
    out << obj.dump() << '\n';
  }
}

Qrels load_qrels(const std::filesystem::path& path) {
  auto in = open_input(path);
  Qrels qrels;
  std::string line;
  std::size_t lineno = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_skipped) {
      header_skipped = true;  // first non-empty row is the header
      continue;
    }
    std::istringstream row(line);
    std::string query_id, doc_id, score_text;
    if (!std::getline(row, query_id, '\t') || !std::getline(row, doc_id, '\t') ||
        !std::getline(row, score_text, '\t')) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 3 TSV columns");
    }
    std::size_t consumed = 0;
    int grade = 0;
    try {
      grade = std::stoi(score_text, &consumed);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": non-integer score '" +
                       score_text + "'");
    }
    if (consumed != score_text.size()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": non-integer score '" +
                       score_text + "'");
    }
    if (qrels.add(query_id, doc_id, grade)) {
      std::cerr << "warning: " << path.string() << ":" << lineno << ": duplicate judgment ("
                << query_id << ", " << doc_id << "), keeping the later row\n";
    }
  }
  return qrels;
}

void save_qrels(const Qrels& qrels, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "query-id\tcorpus-id\tscore\n";
  for (const auto& [query_id, docs] : qrels.judgments()) {
    for (const auto& [doc_id, grade] : docs) {
      out << query_id << '\t' << doc_id << '\t' << grade << '\n';
    }
  }
}

Dataset cap_queries(Dataset dataset, std::size_t limit) {
  if (limit < 1) throw IntegrityError("query cap must be >= 1");
  if (dataset.queries.size() > limit) dataset.queries.resize(limit);
  return dataset;
}

void validate_dataset(const Dataset& dataset) {
  std::set<std::string> query_ids;
  for (const auto& q : dataset.queries) query_ids.insert(q.query_id);
  for (const auto& [query_id, docs] : dataset.qrels.judgments()) {
    if (query_ids.count(query_id) == 0) {
      throw IntegrityError("dataset '" + dataset.name + "': judged query '" + query_id +
                           "' not in query list");
    }
    for (const auto& [doc_id, grade] : docs) {
      (void)grade;
      if (dataset.corpus.find(doc_id) == nullptr) {
        throw IntegrityError("dataset '" + dataset.name + "': judged doc '" + doc_id +
                             "' not in corpus");
      }
    }
  }
}

}  // namespace ranklab
