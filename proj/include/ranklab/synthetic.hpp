#pragma once

#include <cstdint>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/retrieval.hpp"

namespace ranklab {

// Parameters for the seeded topic-model corpus generator. Documents draw
// tokens from a primary and a secondary topic plus background noise;
// embeddings and sparse expansions are derived from the same topics so all
// three retrievers carry correlated but distinct signals.
struct SyntheticSpec {
  std::size_t doc_count = 10000;
  std::size_t train_query_count = 2000;
  std::size_t eval_query_count = 500;
  std::size_t vocab_size = 2000;
  std::size_t topic_count = 50;
  int embedding_dim = 16;
  std::size_t min_doc_tokens = 20;
  std::size_t max_doc_tokens = 60;
  std::size_t min_query_tokens = 3;
  std::size_t max_query_tokens = 6;
  std::uint64_t seed = 7;

  void validate() const;  // throws IntegrityError
};

struct SyntheticData {
  Corpus corpus;
  std::vector<Query> train_queries;  // ids "train-q..."
  std::vector<Query> eval_queries;   // ids "eval-q...", disjoint from train
  EmbeddingTable embeddings;         // docs plus all queries, unit norm
  SparseExpansionModel expansion;    // docs plus all queries
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace ranklab
