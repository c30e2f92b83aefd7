#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ranklab/scorer.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

enum class LossKind { bce, mse, ranknet };
enum class Schedule { linear_decay, constant };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& text);
std::string to_string(Schedule schedule);
Schedule schedule_from_string(const std::string& text);

struct BinaryPairSample {
  std::string query_id;
  std::string doc_id;
  int label = 0;  // 0 or 1
};

struct RegressionPairSample {
  std::string query_id;
  std::string doc_id;
  double teacher_score = 0.0;
};

// Teacher-ordered document list, most relevant first.
struct PermutationSample {
  std::string query_id;
  std::vector<std::string> ordered_doc_ids;
};

// Homogeneous sample stream; exactly one of the three vectors is populated.
struct TrainingSet {
  LossKind kind = LossKind::bce;
  std::vector<BinaryPairSample> bce;
  std::vector<RegressionPairSample> mse;
  std::vector<PermutationSample> ranknet;

  std::size_t size() const;
};

// JSONL, one sample per line, each tagged with "kind". Mixed kinds are an
// integrity error.
TrainingSet load_samples(const std::filesystem::path& path);
void save_samples(const TrainingSet& set, const std::filesystem::path& path);

struct TrainConfig {
  int epochs = 10;
  int batch_size = 32;
  double peak_lr = 1e-5;
  Schedule schedule = Schedule::linear_decay;
  std::uint64_t seed = 0;
  double weight_decay = 0.01;
};

// linear_decay: peak * (1 - step/total_steps); constant: peak.
double lr_at(const TrainConfig& config, std::int64_t step, std::int64_t total_steps);

// Features for one (query, doc) training pair.
using FeatureProvider = std::function<Vector(const std::string& query_id,
                                             const std::string& doc_id)>;

struct LossLogRow {
  int epoch;
  std::int64_t step;
  double lr;
  double loss;
};

struct TrainLog {
  std::vector<LossLogRow> steps;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
};

struct TrainResult {
  MlpScorer model;
  TrainLog log;
};

// Runs epochs x batches of AdamW updates; deterministic for a fixed seed.
// Batch gradients are averaged over samples, accumulated in sample order.
// Throws IntegrityError on an empty dataset and aborts with diagnostics if
// the loss goes non-finite.
TrainResult train(MlpScorer model, const TrainingSet& samples, const TrainConfig& config,
                  const FeatureProvider& features);

// CSV: epoch,step,lr,loss
void save_loss_log(const TrainLog& log, const std::filesystem::path& path);

}  // namespace ranklab
