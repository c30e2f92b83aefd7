#include "ranklab/reranker.hpp"

namespace ranklab {

MlpPairScorer::MlpPairScorer(const MlpScorer& model, const FeatureExtractor& extractor,
                             SignalProvider signals)
    : model_(model), extractor_(extractor), signals_(signals) {}

std::vector<double> MlpPairScorer::score_candidates(
    const Query& query, const std::vector<ScoredDoc>& candidates) const {
  const auto prepared = extractor_.prepare(query);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto signals = signals_.at(query, candidates[i].doc_id, static_cast<int>(i) + 1);
    scores.push_back(model_.forward(extractor_.extract(prepared, candidates[i].doc_id, signals)));
  }
  return scores;
}

std::vector<double> PassthroughScorer::score_candidates(
    const Query& query, const std::vector<ScoredDoc>& candidates) const {
  (void)query;
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.score);
  return scores;
}

QrelsOracleScorer::QrelsOracleScorer(const Qrels& qrels, bool negate)
    : qrels_(qrels), negate_(negate), tag_(negate ? "oracle-negated" : "oracle") {}

std::vector<double> QrelsOracleScorer::score_candidates(
    const Query& query, const std::vector<ScoredDoc>& candidates) const {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double grade = static_cast<double>(qrels_.grade(query.query_id, c.doc_id));
    scores.push_back(negate_ ? -grade : grade);
  }
  return scores;
}

RankedList rerank(const PairScorer& scorer, const RerankRequest& request, const Corpus& corpus) {
  if (request.candidates.entries.empty()) {
    throw IntegrityError("rerank called with an empty candidate list for query '" +
                         request.query.query_id + "'");
  }
  for (const auto& c : request.candidates.entries) {
    if (corpus.find(c.doc_id) == nullptr) {
      throw IntegrityError("candidate doc '" + c.doc_id + "' not in corpus");
    }
  }
  const auto scores = scorer.score_candidates(request.query, request.candidates.entries);
  std::vector<ScoredDoc> rescored;
  rescored.reserve(request.candidates.entries.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    rescored.push_back({request.candidates.entries[i].doc_id, scores[i]});
  }
  return {request.query.query_id, rank_entries(std::move(rescored), request.k), scorer.tag()};
}

}  // namespace ranklab
