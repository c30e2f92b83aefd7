#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

inline constexpr int kFeatureCount = 8;

// Fixed feature order; checkpoints record these names.
const std::array<std::string, kFeatureCount>& feature_names();

// First-stage signals for one (query, doc) pair. Scores default to 0 when
// the corresponding retriever is absent; rank 0 means "not ranked".
struct PairSignals {
  double bm25 = 0.0;
  double dense = 0.0;
  double sparse = 0.0;
  int first_stage_rank = 0;
};

// Computes PairSignals from whichever retrievers are configured. The same
// provider backs teacher scoring, student training and reranking, so
// feature semantics match across all of them.
struct SignalProvider {
  const Bm25Retriever* bm25 = nullptr;
  const DenseRetriever* dense = nullptr;
  const SparseRetriever* sparse = nullptr;

  PairSignals at(const Query& query, const std::string& doc_id, int first_stage_rank) const;
};

// Query-document feature extractor with a per-corpus token cache.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const Corpus& corpus);

  struct PreparedQuery {
    std::size_t token_count = 0;
    std::unordered_set<std::string> distinct;
  };

  PreparedQuery prepare(const Query& query) const;

  // Features, in order: bm25 score, dense score, sparse score, token-overlap
  // count, query-coverage ratio, log(1+doc tokens), log(1+query tokens),
  // first-stage reciprocal rank.
  Vector extract(const PreparedQuery& query, const std::string& doc_id,
                 const PairSignals& signals) const;
  Vector extract(const Query& query, const std::string& doc_id, const PairSignals& signals) const;

  const Corpus& corpus() const { return corpus_; }
  const std::vector<std::vector<std::string>>& doc_tokens() const { return doc_tokens_; }

 private:
  struct DocStats {
    std::size_t token_count = 0;
    std::unordered_set<std::string> distinct;
  };

  const Corpus& corpus_;
  std::vector<std::vector<std::string>> doc_tokens_;
  std::vector<DocStats> doc_stats_;
};

// Standalone spec-shaped extraction; tokenizes both sides on the fly.
Vector extract_features(const Query& query, const Document& doc, const PairSignals& signals);

}  // namespace ranklab
