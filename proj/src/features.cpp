#include "ranklab/features.hpp"

#include <cmath>

#include "ranklab/text.hpp"

namespace ranklab {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "bm25_score",       "dense_score",      "sparse_score",    "token_overlap",
      "query_coverage",   "log1p_doc_len",    "log1p_query_len", "reciprocal_rank",
  };
  return names;
}

PairSignals SignalProvider::at(const Query& query, const std::string& doc_id,
                               int first_stage_rank) const {
  PairSignals s;
  if (bm25 != nullptr) s.bm25 = bm25->pair_score(query, doc_id);
  if (dense != nullptr) s.dense = dense->pair_score(query, doc_id);
  if (sparse != nullptr) s.sparse = sparse->pair_score(query, doc_id);
  s.first_stage_rank = first_stage_rank;
  return s;
}

namespace {

Vector assemble(const PairSignals& signals, std::size_t overlap, std::size_t query_distinct,
                std::size_t doc_tokens, std::size_t query_tokens) {
  Vector f(kFeatureCount);
  f[0] = signals.bm25;
  f[1] = signals.dense;
  f[2] = signals.sparse;
  f[3] = static_cast<double>(overlap);
  f[4] = query_distinct == 0
             ? 0.0
             : static_cast<double>(overlap) / static_cast<double>(query_distinct);
  f[5] = std::log1p(static_cast<double>(doc_tokens));
  f[6] = std::log1p(static_cast<double>(query_tokens));
  f[7] = signals.first_stage_rank > 0 ? 1.0 / static_cast<double>(signals.first_stage_rank) : 0.0;
  if (!f.allFinite()) throw IntegrityError("non-finite feature value");
  return f;
}

}  // namespace

FeatureExtractor::FeatureExtractor(const Corpus& corpus) : corpus_(corpus) {
  doc_tokens_.reserve(corpus.size());
  doc_stats_.reserve(corpus.size());
  for (const auto& doc : corpus.docs()) {
    doc_tokens_.push_back(tokenize_fields(doc.title, doc.text));
    DocStats stats;
    stats.token_count = doc_tokens_.back().size();
    stats.distinct.insert(doc_tokens_.back().begin(), doc_tokens_.back().end());
    doc_stats_.push_back(std::move(stats));
  }
}

FeatureExtractor::PreparedQuery FeatureExtractor::prepare(const Query& query) const {
  PreparedQuery prepared;
  const auto tokens = tokenize(query.text);
  prepared.token_count = tokens.size();
  prepared.distinct.insert(tokens.begin(), tokens.end());
  return prepared;
}

Vector FeatureExtractor::extract(const PreparedQuery& query, const std::string& doc_id,
                                 const PairSignals& signals) const {
  const auto ordinal = corpus_.ordinal_of(doc_id);
  if (!ordinal) throw IntegrityError("doc '" + doc_id + "' not in corpus");
  const auto& stats = doc_stats_[static_cast<std::size_t>(*ordinal)];
  std::size_t overlap = 0;
  for (const auto& token : query.distinct) {
    if (stats.distinct.count(token) > 0) ++overlap;
  }
  return assemble(signals, overlap, query.distinct.size(), stats.token_count, query.token_count);
}

Vector FeatureExtractor::extract(const Query& query, const std::string& doc_id,
                                 const PairSignals& signals) const {
  return extract(prepare(query), doc_id, signals);
}

Vector extract_features(const Query& query, const Document& doc, const PairSignals& signals) {
  const auto query_tokens = tokenize(query.text);
  const auto doc_tokens = tokenize_fields(doc.title, doc.text);
  std::unordered_set<std::string> query_distinct(query_tokens.begin(), query_tokens.end());
  std::unordered_set<std::string> doc_distinct(doc_tokens.begin(), doc_tokens.end());
  std::size_t overlap = 0;
  for (const auto& token : query_distinct) {
    if (doc_distinct.count(token) > 0) ++overlap;
  }
  return assemble(signals, overlap, query_distinct.size(), doc_tokens.size(),
                  query_tokens.size());
}

}  // namespace ranklab
