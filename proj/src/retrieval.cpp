#include "ranklab/retrieval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ranklab/text.hpp"

namespace ranklab {

using nlohmann::json;

namespace {

bool ranked_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

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

// Scores indexed by corpus ordinal -> ranked top-k list with doc ids.
std::vector<ScoredDoc> top_entries(const Corpus& corpus, const std::vector<double>& scores,
                                   std::size_t k) {
  std::vector<ScoredDoc> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    entries.push_back({corpus.at(i).doc_id, scores[i]});
  }
  return rank_entries(std::move(entries), k);
}

}  // namespace

std::vector<ScoredDoc> rank_entries(std::vector<ScoredDoc> entries, std::size_t k) {
  const std::size_t cut = std::min(k, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(cut),
                    entries.end(), ranked_before);
  entries.resize(cut);
  return entries;
}

EmbeddingTable::EmbeddingTable(int dimension, std::unordered_map<std::string, Vector> vectors)
    : dimension_(dimension), vectors_(std::move(vectors)) {
  for (const auto& [id, vec] : vectors_) {
    if (vec.size() != dimension_) {
      throw IntegrityError("embedding '" + id + "' has dimension " + std::to_string(vec.size()) +
                           ", expected " + std::to_string(dimension_));
    }
    if (std::abs(vec.norm() - 1.0) > 1e-6) {
      throw IntegrityError("embedding '" + id + "' is not unit-normalized");
    }
  }
}

const Vector* EmbeddingTable::find(const std::string& id) const {
  const auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::unordered_map<std::string, Vector> vectors;
  int dimension = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("_id") ||
        !obj.contains("vector")) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed embedding line");
    }
    const auto id = obj["_id"].get<std::string>();
    const auto values = obj["vector"].get<std::vector<double>>();
    if (dimension < 0) dimension = static_cast<int>(values.size());
    Vector vec = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    if (!vectors.emplace(id, std::move(vec)).second) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineno) + ": duplicate _id '" +
                           id + "'");
    }
  }
  if (dimension < 0) dimension = 0;
  return EmbeddingTable(dimension, std::move(vectors));
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
  auto out = open_output(path);
  std::vector<const std::string*> ids;
  ids.reserve(vectors_.size());
  for (const auto& [id, vec] : vectors_) ids.push_back(&id);
  std::sort(ids.begin(), ids.end(), [](const auto* a, const auto* b) { return *a < *b; });
  for (const auto* id : ids) {
    const Vector& vec = vectors_.at(*id);
    json obj;
    obj["_id"] = *id;
    obj["vector"] = std::vector<double>(vec.data(), vec.data() + vec.size());
    out << obj.dump() << '\n';
  }
}

SparseExpansionModel::SparseExpansionModel(std::unordered_map<std::string, WeightMap> weights)
    : weights_(std::move(weights)) {
  for (const auto& [id, map] : weights_) {
    for (const auto& [term, w] : map) {
      if (w < 0.0) {
        throw IntegrityError("sparse weight for '" + id + "' term '" + term + "' is negative");
      }
    }
  }
}

const SparseExpansionModel::WeightMap* SparseExpansionModel::find(const std::string& id) const {
  const auto it = weights_.find(id);
  return it == weights_.end() ? nullptr : &it->second;
}

SparseExpansionModel SparseExpansionModel::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::unordered_map<std::string, WeightMap> weights;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("_id") ||
        !obj.contains("weights")) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed weights line");
    }
    const auto id = obj["_id"].get<std::string>();
    WeightMap map;
    for (const auto& [term, value] : obj["weights"].items()) {
      map[term] = value.get<double>();
    }
    if (!weights.emplace(id, std::move(map)).second) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineno) + ": duplicate _id '" +
                           id + "'");
    }
  }
  return SparseExpansionModel(std::move(weights));
}

void SparseExpansionModel::save(const std::filesystem::path& path) const {
  auto out = open_output(path);
  std::vector<const std::string*> ids;
  ids.reserve(weights_.size());
  for (const auto& [id, map] : weights_) ids.push_back(&id);
  std::sort(ids.begin(), ids.end(), [](const auto* a, const auto* b) { return *a < *b; });
  for (const auto* id : ids) {
    json obj;
    obj["_id"] = *id;
    json w = json::object();
    for (const auto& [term, value] : weights_.at(*id)) w[term] = value;
    obj["weights"] = std::move(w);
    out << obj.dump() << '\n';
  }
}

Bm25Retriever::Bm25Retriever(const Corpus& corpus, InvertedIndex index, Bm25Params params)
    : corpus_(corpus), index_(std::move(index)), params_(params) {}

RankedList Bm25Retriever::topk(const Query& query, std::size_t k0) const {
  const auto terms = tokenize(query.text);
  const auto scores = index_.bm25_score_all(params_, terms);
  return {query.query_id, top_entries(corpus_, scores, k0), tag_};
}

double Bm25Retriever::pair_score(const Query& query, const std::string& doc_id) const {
  const auto ordinal = corpus_.ordinal_of(doc_id);
  if (!ordinal) throw IntegrityError("doc '" + doc_id + "' not in corpus");
  return index_.bm25_score(params_, tokenize(query.text), *ordinal);
}

DenseRetriever::DenseRetriever(const Corpus& corpus, const EmbeddingTable& table)
    : corpus_(corpus), table_(table) {
  doc_matrix_.resize(table.dimension(), static_cast<Eigen::Index>(corpus.size()));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Vector* vec = table.find(corpus.at(i).doc_id);
    if (vec == nullptr) {
      throw IntegrityError("no embedding for doc '" + corpus.at(i).doc_id + "'");
    }
    doc_matrix_.col(static_cast<Eigen::Index>(i)) = *vec;
  }
}

const Vector& DenseRetriever::query_vector(const Query& query) const {
  const Vector* vec = table_.find(query.query_id);
  if (vec == nullptr) {
    throw IntegrityError("no embedding for query '" + query.query_id + "'");
  }
  return *vec;
}

RankedList DenseRetriever::topk(const Query& query, std::size_t k0) const {
  const Vector scores = doc_matrix_.transpose() * query_vector(query);
  std::vector<double> flat(scores.data(), scores.data() + scores.size());
  return {query.query_id, top_entries(corpus_, flat, k0), tag_};
}

double DenseRetriever::pair_score(const Query& query, const std::string& doc_id) const {
  const auto ordinal = corpus_.ordinal_of(doc_id);
  if (!ordinal) throw IntegrityError("doc '" + doc_id + "' not in corpus");
  return doc_matrix_.col(*ordinal).dot(query_vector(query));
}

SparseRetriever::SparseRetriever(const Corpus& corpus, const SparseExpansionModel& model)
    : corpus_(corpus), model_(model) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto* map = model.find(corpus.at(i).doc_id);
    if (map == nullptr) continue;  // absent doc expansion scores 0 everywhere
    for (const auto& [term, w] : *map) {
      term_docs_[term].emplace_back(static_cast<std::int32_t>(i), w);
    }
  }
}

const SparseExpansionModel::WeightMap& SparseRetriever::query_weights(const Query& query) const {
  const auto* map = model_.find(query.query_id);
  if (map == nullptr) {
    throw IntegrityError("no sparse weights for query '" + query.query_id + "'");
  }
  return *map;
}

RankedList SparseRetriever::topk(const Query& query, std::size_t k0) const {
  const auto& qw = query_weights(query);
  std::vector<double> scores(corpus_.size(), 0.0);
  for (const auto& [term, w] : qw) {
    const auto it = term_docs_.find(term);
    if (it == term_docs_.end()) continue;
    for (const auto& [ordinal, dw] : it->second) {
      scores[static_cast<std::size_t>(ordinal)] += w * dw;
    }
  }
  return {query.query_id, top_entries(corpus_, scores, k0), tag_};
}

double SparseRetriever::pair_score(const Query& query, const std::string& doc_id) const {
  if (corpus_.find(doc_id) == nullptr) throw IntegrityError("doc '" + doc_id + "' not in corpus");
  const auto& qw = query_weights(query);
  const auto* dw = model_.find(doc_id);
  if (dw == nullptr) return 0.0;
  double score = 0.0;
  // both maps are ordered; walk the smaller one
  for (const auto& [term, w] : qw) {
    const auto it = dw->find(term);
    if (it != dw->end()) score += w * it->second;
  }
  return score;
}

RankedList retrieve_topk(const Retriever& retriever, const Query& query, std::size_t k0) {
  return retriever.topk(query, k0);
}

}  // namespace ranklab
