#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/features.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/scorer.hpp"
#include "ranklab/train.hpp"

namespace ranklab {

struct CandidateSource {
  int rank = 0;
  double score = 0.0;
};

struct Candidate {
  std::string doc_id;
  std::map<std::string, CandidateSource> sources;  // retriever tag -> rank/score

  int best_rank() const;
};

// Deduplicated union of per-retriever top-k lists for one query; candidates
// kept sorted by doc_id.
struct CandidatePool {
  std::string query_id;
  std::vector<Candidate> candidates;
};

CandidatePool mine_candidates(const Query& query, std::span<const Retriever* const> retrievers,
                              std::size_t per_retriever_k);

// JSONL, one pool per line.
void save_pools(const std::vector<CandidatePool>& pools, const std::filesystem::path& path);
std::vector<CandidatePool> load_pools(const std::filesystem::path& path);

// Query-document relevance scores from a teacher model.
class PairTeacher {
 public:
  virtual ~PairTeacher() = default;
  virtual const std::string& tag() const = 0;
  virtual double score(const Query& query, const std::string& doc_id,
                       const PairSignals& signals) const = 0;
};

// Synthetic teacher: an MLP over the standard pair features.
class MlpTeacher : public PairTeacher {
 public:
  MlpTeacher(MlpScorer model, const FeatureExtractor& extractor);

  const std::string& tag() const override { return model_.tag; }
  double score(const Query& query, const std::string& doc_id,
               const PairSignals& signals) const override;

  const MlpScorer& model() const { return model_; }

 private:
  MlpScorer model_;
  const FeatureExtractor& extractor_;
};

// Replays precomputed scores from a file; unknown pairs are an error.
class FileTeacher : public PairTeacher {
 public:
  explicit FileTeacher(const std::filesystem::path& path, std::string tag = "file-teacher");

  const std::string& tag() const override { return tag_; }
  double score(const Query& query, const std::string& doc_id,
               const PairSignals& signals) const override;

 private:
  std::unordered_map<std::string, std::map<std::string, double>> scores_;
  std::string tag_;
};

// Teacher scores per query; preserves query insertion order (file order) so
// derived sample streams are reproducible.
class TeacherScores {
 public:
  void add(const std::string& query_id, const std::string& doc_id, double score);

  const std::vector<std::string>& query_order() const { return query_order_; }
  const std::map<std::string, double>* find(const std::string& query_id) const;
  std::size_t pair_count() const;

  std::string teacher_tag;

  // TSV: query_id <TAB> doc_id <TAB> score, no header.
  void save_tsv(const std::filesystem::path& path) const;
  static TeacherScores load_tsv(const std::filesystem::path& path);

 private:
  std::vector<std::string> query_order_;
  std::unordered_map<std::string, std::map<std::string, double>> scores_;
};

// Scores every pool candidate. Signals come from the provider; the
// reciprocal-rank slot uses the candidate's best rank across sources.
void score_pool(const PairTeacher& teacher, const Query& query, const CandidatePool& pool,
                const SignalProvider& signals, TeacherScores& out);

// One regression sample per scored pair, ordered by query file order then
// doc_id.
TrainingSet build_mse_set(const TeacherScores& scores);

struct PermutationSetResult {
  TrainingSet set;
  std::size_t skipped_queries = 0;  // pools with fewer than 2 candidates
};

// Per query: sort candidates by teacher score descending (ties ascending
// doc_id), truncate to list_length.
PermutationSetResult build_permutation_set(const TeacherScores& scores, std::size_t list_length);

// Binary samples with hard negatives: positives are the query's positively
// judged candidates; negatives are drawn (seeded, without replacement) from
// unjudged pool candidates at negatives_per_positive : 1.
TrainingSet build_bce_set(const std::vector<CandidatePool>& pools, const Qrels& qrels,
                          std::size_t negatives_per_positive, Rng& rng);

}  // namespace ranklab
