#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/index.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

struct ScoredDoc {
  std::string doc_id;
  double score;

  bool operator==(const ScoredDoc&) const = default;
};

// Ordered results for one query: score descending, ties by ascending doc_id,
// no duplicate ids.
struct RankedList {
  std::string query_id;
  std::vector<ScoredDoc> entries;
  std::string source_tag;
};

// Sorts (score desc, doc_id asc) and truncates to k. The single ordering
// used by every retriever and the reranker.
std::vector<ScoredDoc> rank_entries(std::vector<ScoredDoc> entries, std::size_t k);

// Unit-normalized vectors for documents and queries.
class EmbeddingTable {
 public:
  EmbeddingTable(int dimension, std::unordered_map<std::string, Vector> vectors);

  int dimension() const { return dimension_; }
  const Vector* find(const std::string& id) const;
  std::size_t size() const { return vectors_.size(); }

  // JSONL: {"_id": str, "vector": [floats]}. Validates unit norm (1 +- 1e-6).
  static EmbeddingTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  int dimension_;
  std::unordered_map<std::string, Vector> vectors_;
};

// Sparse term-weight maps for documents and queries, all weights >= 0.
class SparseExpansionModel {
 public:
  using WeightMap = std::map<std::string, double>;

  explicit SparseExpansionModel(std::unordered_map<std::string, WeightMap> weights);

  const WeightMap* find(const std::string& id) const;
  std::size_t size() const { return weights_.size(); }

  // JSONL: {"_id": str, "weights": {term: float}}.
  static SparseExpansionModel load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::unordered_map<std::string, WeightMap> weights_;
};

// First-stage retriever: scores the whole corpus for a query (exhaustive,
// exact) and returns the top k0. pair_score exposes the same scoring
// function for single (query, doc) pairs, used by the feature extractor.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual const std::string& tag() const = 0;
  virtual RankedList topk(const Query& query, std::size_t k0) const = 0;
  virtual double pair_score(const Query& query, const std::string& doc_id) const = 0;
};

class Bm25Retriever : public Retriever {
 public:
  Bm25Retriever(const Corpus& corpus, InvertedIndex index, Bm25Params params = {});

  const std::string& tag() const override { return tag_; }
  RankedList topk(const Query& query, std::size_t k0) const override;
  double pair_score(const Query& query, const std::string& doc_id) const override;

  const InvertedIndex& index() const { return index_; }

 private:
  const Corpus& corpus_;
  InvertedIndex index_;
  Bm25Params params_;
  std::string tag_ = "bm25";
};

class DenseRetriever : public Retriever {
 public:
  // Every corpus doc must have a vector; queries are looked up on demand.
  DenseRetriever(const Corpus& corpus, const EmbeddingTable& table);

  const std::string& tag() const override { return tag_; }
  RankedList topk(const Query& query, std::size_t k0) const override;
  double pair_score(const Query& query, const std::string& doc_id) const override;

 private:
  const Vector& query_vector(const Query& query) const;

  const Corpus& corpus_;
  const EmbeddingTable& table_;
  Matrix doc_matrix_;  // dimension x N, column per corpus ordinal
  std::string tag_ = "dense-cosine";
};

class SparseRetriever : public Retriever {
 public:
  SparseRetriever(const Corpus& corpus, const SparseExpansionModel& model);

  const std::string& tag() const override { return tag_; }
  RankedList topk(const Query& query, std::size_t k0) const override;
  double pair_score(const Query& query, const std::string& doc_id) const override;

 private:
  const SparseExpansionModel::WeightMap& query_weights(const Query& query) const;

  const Corpus& corpus_;
  const SparseExpansionModel& model_;
  // term -> (ordinal, weight), for scoring all docs in one pass
  std::unordered_map<std::string, std::vector<std::pair<std::int32_t, double>>> term_docs_;
  std::string tag_ = "sparse-dot";
};

// Truncates an exhaustive scoring of the corpus to min(k0, N) entries.
RankedList retrieve_topk(const Retriever& retriever, const Query& query, std::size_t k0);

}  // namespace ranklab
