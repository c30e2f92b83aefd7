#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/distill.hpp"
#include "ranklab/eval.hpp"
#include "ranklab/features.hpp"
#include "ranklab/index.hpp"
#include "ranklab/reranker.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/synthetic.hpp"
#include "ranklab/train.hpp"

namespace ranklab {

enum class RetrieverKind { bm25, dense, sparse };

std::string to_string(RetrieverKind kind);
RetrieverKind retriever_kind_from_string(const std::string& text);

// Owns the retrieval machinery for one corpus: the feature extractor, the
// BM25 index, and whichever embedding/expansion artifacts are attached.
// Retrievers hold references into this object, so it must outlive them.
class RetrieverStack {
 public:
  explicit RetrieverStack(const Corpus& corpus,
                          std::optional<InvertedIndex> index = std::nullopt);

  void attach_embeddings(EmbeddingTable table);
  void attach_expansion(SparseExpansionModel model);

  const Corpus& corpus() const { return *corpus_; }
  const FeatureExtractor& extractor() const { return *extractor_; }
  const Bm25Retriever& bm25() const { return *bm25_; }
  const EmbeddingTable* embeddings() const { return embeddings_.get(); }
  const SparseExpansionModel* expansion() const { return expansion_.get(); }

  // Throws IntegrityError when the needed artifact was never attached.
  const Retriever& retriever(RetrieverKind kind) const;
  // The mining trio, in bm25 / dense / sparse order; all must be attached.
  std::vector<const Retriever*> all_retrievers() const;
  SignalProvider signals() const;

 private:
  const Corpus* corpus_;
  std::unique_ptr<FeatureExtractor> extractor_;
  std::unique_ptr<Bm25Retriever> bm25_;
  std::unique_ptr<EmbeddingTable> embeddings_;
  std::unique_ptr<DenseRetriever> dense_;
  std::unique_ptr<SparseExpansionModel> expansion_;
  std::unique_ptr<SparseRetriever> sparse_;
};

struct PipelineConfig {
  std::size_t k0 = 100;       // candidate depth
  std::size_t k = 10;         // rerank output depth
  std::size_t query_cap = 1000;
  RetrieverKind retriever = RetrieverKind::bm25;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;  // k in [1, k0], query_cap >= 1
};

struct DatasetPaths {
  std::string name;
  std::string group;
  std::filesystem::path corpus;
  std::filesystem::path queries;
  std::filesystem::path qrels;
  std::filesystem::path embeddings;  // optional, empty when absent
  std::filesystem::path expansion;   // optional
};

// Manifest: pipeline parameters plus the dataset list. Relative paths
// resolve against the manifest's directory.
struct BenchmarkManifest {
  PipelineConfig config;
  std::vector<DatasetPaths> datasets;

  static BenchmarkManifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct BenchmarkEntry {
  Dataset dataset;
  std::unique_ptr<EmbeddingTable> embeddings;
  std::unique_ptr<SparseExpansionModel> expansion;
};

BenchmarkEntry load_benchmark_entry(const DatasetPaths& paths);

// Builds the second-stage scorer for one dataset; null factory means
// passthrough (stage-1 order is kept and the report equals the baseline).
using ScorerFactory =
    std::function<std::unique_ptr<PairScorer>(const Dataset&, const RetrieverStack&)>;

// Training-time feature provider over mined pools: the reciprocal-rank slot
// uses each candidate's best mined rank, matching teacher scoring. Samples
// referencing pairs outside the pools are an integrity error. The returned
// callable keeps references into `stack`, which must outlive it; it is not
// safe for concurrent calls.
FeatureProvider make_pool_feature_provider(const std::vector<Query>& queries,
                                           const std::vector<CandidatePool>& pools,
                                           const RetrieverStack& stack);

struct DatasetRun {
  std::string dataset;
  std::vector<RankedList> stage1;    // top-k0 in retriever order
  std::vector<RankedList> reranked;  // top-k in reranker order
  RunEvaluation stage1_eval;
  RunEvaluation reranked_eval;
};

struct BenchmarkOutput {
  std::vector<DatasetRun> runs;
  GroupAssignment groups;
  DatasetScores baseline;  // stage-1 mean NDCG@k per dataset
  DatasetScores model;
  EvalReport baseline_report;
  EvalReport model_report;
  std::string model_tag;
};

// Per dataset: cap queries, retrieve top-k0, rerank to top-k, evaluate both
// stages. Errors from module code are rethrown with the dataset name.
BenchmarkOutput run_benchmark(const PipelineConfig& config, std::vector<BenchmarkEntry> entries,
                              const ScorerFactory& make_scorer);

struct StudentSpec {
  LossKind loss = LossKind::mse;
  int hidden = 16;
  double init_scale = 0.5;
  TrainConfig train;
};

// Synthetic distillation study. One master seed drives corpus generation,
// the hidden teacher, ground-truth grades, student initialization and
// training, so a spec plus a seed pins the whole experiment.
struct ExperimentSpec {
  SyntheticSpec synthetic;  // its seed field is overridden by `seed`
  std::uint64_t seed = 0;
  int teacher_hidden = 32;
  double teacher_scale = 1.5;
  std::size_t per_retriever_k = 16;  // mining depth per retriever
  std::size_t list_length = 20;      // RankNet permutation length
  std::size_t k0 = 100;
  std::size_t k = 10;
  double top_fraction = 0.10;  // grade-2 share of each candidate list
  double mid_fraction = 0.20;  // grade-1 share
  RetrieverKind primary = RetrieverKind::bm25;
  StudentSpec mse_student{LossKind::mse, 16, 0.5,
                          TrainConfig{10, 32, 3e-3, Schedule::linear_decay, 0, 0.01}};
  StudentSpec ranknet_student{LossKind::ranknet, 16, 0.5,
                              TrainConfig{20, 32, 1e-2, Schedule::constant, 0, 0.01}};
  int threads = 1;

  void validate() const;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  std::size_t k = 10;  // NDCG cutoff the numbers below refer to
  double baseline_ndcg = 0.0;
  double mse_ndcg = 0.0;
  double ranknet_ndcg = 0.0;
  double teacher_ndcg = 0.0;
  double mse_tau = 0.0;      // mean per-query Kendall tau vs teacher scores
  double ranknet_tau = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t train_pairs = 0;
  std::size_t train_lists = 0;
  double mse_final_loss = 0.0;
  double ranknet_final_loss = 0.0;
};

// Generates data, mines candidates, scores them with the hidden teacher,
// trains the MSE and RankNet students, and evaluates every system on the
// held-out queries. Writes all artifacts under out_dir unless it is empty.
ExperimentResult run_distillation_experiment(const ExperimentSpec& spec,
                                             const std::filesystem::path& out_dir);

std::string render_experiment_table(const ExperimentResult& result);
void save_experiment_report(const ExperimentResult& result, const std::filesystem::path& path);

}  // namespace ranklab
