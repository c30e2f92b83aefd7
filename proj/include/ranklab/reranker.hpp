#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/features.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/scorer.hpp"

namespace ranklab {

struct RerankRequest {
  Query query;
  RankedList candidates;
  std::size_t k = 10;
};

// Second-stage scorer: one relevance scalar per candidate.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual const std::string& tag() const = 0;
  virtual std::vector<double> score_candidates(const Query& query,
                                               const std::vector<ScoredDoc>& candidates) const = 0;
};

// The student reranker: features -> MLP score per pair. Candidate rank in
// the incoming list supplies the reciprocal-rank signal.
class MlpPairScorer : public PairScorer {
 public:
  MlpPairScorer(const MlpScorer& model, const FeatureExtractor& extractor,
                SignalProvider signals);

  const std::string& tag() const override { return model_.tag; }
  std::vector<double> score_candidates(const Query& query,
                                       const std::vector<ScoredDoc>& candidates) const override;

 private:
  const MlpScorer& model_;
  const FeatureExtractor& extractor_;
  SignalProvider signals_;
};

// Keeps the first-stage scores; reranking with it reproduces the input list.
class PassthroughScorer : public PairScorer {
 public:
  explicit PassthroughScorer(std::string tag = "passthrough") : tag_(std::move(tag)) {}
  const std::string& tag() const override { return tag_; }
  std::vector<double> score_candidates(const Query& query,
                                       const std::vector<ScoredDoc>& candidates) const override;

 private:
  std::string tag_;
};

// Scores candidates by their relevance grade (optionally negated); the
// upper/lower bound reference systems for pipeline checks.
class QrelsOracleScorer : public PairScorer {
 public:
  QrelsOracleScorer(const Qrels& qrels, bool negate);
  const std::string& tag() const override { return tag_; }
  std::vector<double> score_candidates(const Query& query,
                                       const std::vector<ScoredDoc>& candidates) const override;

 private:
  const Qrels& qrels_;
  bool negate_;
  std::string tag_;
};

// Scores every candidate, sorts (score desc, doc_id asc) and truncates to k.
// Every candidate must exist in the corpus.
RankedList rerank(const PairScorer& scorer, const RerankRequest& request, const Corpus& corpus);

}  // namespace ranklab
