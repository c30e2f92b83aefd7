#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/retrieval.hpp"

namespace ranklab {

// Gain applied to a relevance grade. linear follows trec_eval; exponential
// is 2^grade - 1.
enum class GainMode { linear, exponential };

// DCG@k with log2(rank+1) discount; unjudged docs contribute 0.
double dcg_at_k(const std::vector<std::string>& ranking, const Qrels::DocGrades& grades,
                std::size_t k, GainMode gain = GainMode::linear);

// DCG normalized by the ideal ordering of all judged docs. Returns 0 when no
// judged doc has a positive grade.
double ndcg_at_k(const std::vector<std::string>& ranking, const Qrels::DocGrades& grades,
                 std::size_t k, GainMode gain = GainMode::linear);

struct QueryScore {
  std::string query_id;
  double ndcg;
};

struct RunEvaluation {
  std::vector<QueryScore> per_query;  // evaluable queries, in dataset order
  double mean_ndcg = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // queries without positive judgments
};

// Mean NDCG@k over evaluable queries (those with at least one positive
// judgment). Queries missing from the run score 0. Run query ids must be a
// subset of the dataset's queries.
RunEvaluation evaluate_run(const std::vector<RankedList>& run, const Dataset& dataset,
                           std::size_t k = 10, GainMode gain = GainMode::linear);

// One (dataset, value) row per dataset, in manifest order.
using DatasetScores = std::vector<std::pair<std::string, double>>;
using GroupAssignment = std::vector<std::pair<std::string, std::string>>;  // dataset -> group

struct EvalReport {
  DatasetScores per_dataset;
  std::vector<std::pair<std::string, double>> per_group;  // group order of first appearance
  double overall = 0.0;
  DatasetScores baseline_deltas;               // model - baseline, per dataset
  std::vector<std::string> improved_datasets;  // model > baseline
  double baseline_overall = 0.0;
  bool improved_overall = false;
};

// Unweighted means per group and overall, plus deltas against a baseline
// covering the same datasets.
EvalReport aggregate(const DatasetScores& model, const DatasetScores& baseline,
                     const GroupAssignment& groups);

struct ChartRow {
  std::string dataset;
  double baseline;
  double model;
  double delta;
};

// Per-dataset deltas sorted ascending by (model - baseline); both reports
// must cover identical dataset sets.
std::vector<ChartRow> compare_chart_data(const DatasetScores& model,
                                         const DatasetScores& baseline);
void save_chart_csv(const std::vector<ChartRow>& rows, const std::filesystem::path& path);

struct ThroughputReport {
  std::string model_tag;
  std::size_t queries_processed = 0;
  double wall_seconds = 0.0;
  double qps = 0.0;
  // Externally reported reference points for comparison (tag, qps).
  std::vector<std::pair<std::string, double>> reference;
};

double queries_per_second(std::size_t queries_processed, double wall_seconds);

// Times rerank_one over the requests, measuring only the calls themselves.
ThroughputReport measure_throughput(const std::string& model_tag, std::size_t request_count,
                                    const std::function<void(std::size_t)>& rerank_one);

// Kendall rank correlation (tau-b) between two score lists over the same
// items; O(n^2), exact, tie-aware.
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

// Report serialization: JSON plus an aligned text table shaped like a
// benchmark results table (Average + one column per group).
void save_report_json(const std::map<std::string, EvalReport>& models_by_tag,
                      const std::string& baseline_tag, const std::filesystem::path& path);
std::string render_report_table(const std::vector<std::pair<std::string, EvalReport>>& models,
                                const std::string& baseline_tag);

}  // namespace ranklab
