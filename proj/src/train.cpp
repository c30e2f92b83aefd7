#include "ranklab/train.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>

#include "ranklab/losses.hpp"
#include "ranklab/optimizer.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/run_file.hpp"

namespace ranklab {

using nlohmann::json;

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::bce: return "bce";
    case LossKind::mse: return "mse";
    case LossKind::ranknet: return "ranknet";
  }
  return "?";
}

LossKind loss_kind_from_string(const std::string& text) {
  if (text == "bce") return LossKind::bce;
  if (text == "mse") return LossKind::mse;
  if (text == "ranknet") return LossKind::ranknet;
  throw ParseError("unknown loss kind '" + text + "'");
}

std::string to_string(Schedule schedule) {
  return schedule == Schedule::linear_decay ? "linear_decay" : "constant";
}

Schedule schedule_from_string(const std::string& text) {
  if (text == "linear_decay") return Schedule::linear_decay;
  if (text == "constant") return Schedule::constant;
  throw ParseError("unknown schedule '" + text + "'");
}

std::size_t TrainingSet::size() const {
  switch (kind) {
    case LossKind::bce: return bce.size();
    case LossKind::mse: return mse.size();
    case LossKind::ranknet: return ranknet.size();
  }
  return 0;
}

TrainingSet load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  TrainingSet set;
  bool kind_known = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("kind")) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed sample line");
    }
    const LossKind kind = loss_kind_from_string(obj["kind"].get<std::string>());
    if (!kind_known) {
      set.kind = kind;
      kind_known = true;
    } else if (kind != set.kind) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineno) +
                           ": mixed sample kinds ('" + to_string(set.kind) + "' vs '" +
                           to_string(kind) + "')");
    }
    switch (kind) {
      case LossKind::bce: {
        const int label = obj.at("label").get<int>();
        if (label != 0 && label != 1) {
          throw IntegrityError(path.string() + ":" + std::to_string(lineno) +
                               ": BCE label must be 0 or 1");
        }
        set.bce.push_back({obj.at("query_id").get<std::string>(),
                           obj.at("doc_id").get<std::string>(), label});
        break;
      }
      case LossKind::mse: {
        const double t = obj.at("teacher_score").get<double>();
        if (!std::isfinite(t)) {
          throw IntegrityError(path.string() + ":" + std::to_string(lineno) +
                               ": non-finite teacher score");
        }
        set.mse.push_back({obj.at("query_id").get<std::string>(),
                           obj.at("doc_id").get<std::string>(), t});
        break;
      }
      case LossKind::ranknet: {
        auto docs = obj.at("doc_ids").get<std::vector<std::string>>();
        if (docs.size() < 2) {
          throw IntegrityError(path.string() + ":" + std::to_string(lineno) +
                               ": permutation sample needs at least 2 docs");
        }
        set.ranknet.push_back({obj.at("query_id").get<std::string>(), std::move(docs)});
        break;
      }
    }
  }
  return set;
}

void save_samples(const TrainingSet& set, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  switch (set.kind) {
    case LossKind::bce:
      for (const auto& s : set.bce) {
        json obj{{"kind", "bce"}, {"query_id", s.query_id}, {"doc_id", s.doc_id},
                 {"label", s.label}};
        out << obj.dump() << '\n';
      }
      break;
    case LossKind::mse:
      for (const auto& s : set.mse) {
        json obj{{"kind", "mse"}, {"query_id", s.query_id}, {"doc_id", s.doc_id},
                 {"teacher_score", s.teacher_score}};
        out << obj.dump() << '\n';
      }
      break;
    case LossKind::ranknet:
      for (const auto& s : set.ranknet) {
        json obj{{"kind", "ranknet"}, {"query_id", s.query_id}, {"doc_ids", s.ordered_doc_ids}};
        out << obj.dump() << '\n';
      }
      break;
  }
}

double lr_at(const TrainConfig& config, std::int64_t step, std::int64_t total_steps) {
  if (total_steps < 1 || step < 0 || step > total_steps) {
    throw IntegrityError("lr_at: step out of range");
  }
  if (config.schedule == Schedule::constant) return config.peak_lr;
  return config.peak_lr *
         (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

namespace {

// Pairwise sample view: features materialized once, target per sample.
struct PairData {
  Matrix features;   // F x n
  Vector targets;    // label or teacher score
  std::vector<const std::string*> query_ids;
  std::vector<const std::string*> doc_ids;
};

struct ListData {
  std::vector<Matrix> features;  // F x L_i per sample
  std::vector<const std::string*> query_ids;
};

}  // namespace

TrainResult train(MlpScorer model, const TrainingSet& samples, const TrainConfig& config,
                  const FeatureProvider& features) {
  if (samples.size() == 0) throw IntegrityError("training set is empty");
  if (config.epochs < 1 || config.batch_size < 1 || config.peak_lr <= 0.0) {
    throw IntegrityError("invalid training config");
  }
  const Eigen::Index f = model.feature_count();
  const std::size_t n = samples.size();

  PairData pairs;
  ListData lists;
  if (samples.kind == LossKind::ranknet) {
    lists.features.reserve(n);
    lists.query_ids.reserve(n);
    for (const auto& s : samples.ranknet) {
      Matrix block(f, static_cast<Eigen::Index>(s.ordered_doc_ids.size()));
      for (std::size_t d = 0; d < s.ordered_doc_ids.size(); ++d) {
        block.col(static_cast<Eigen::Index>(d)) = features(s.query_id, s.ordered_doc_ids[d]);
      }
      lists.features.push_back(std::move(block));
      lists.query_ids.push_back(&s.query_id);
    }
  } else {
    pairs.features.resize(f, static_cast<Eigen::Index>(n));
    pairs.targets.resize(static_cast<Eigen::Index>(n));
    pairs.query_ids.reserve(n);
    pairs.doc_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      if (samples.kind == LossKind::bce) {
        const auto& s = samples.bce[i];
        pairs.features.col(idx) = features(s.query_id, s.doc_id);
        pairs.targets[idx] = static_cast<double>(s.label);
        pairs.query_ids.push_back(&s.query_id);
        pairs.doc_ids.push_back(&s.doc_id);
      } else {
        const auto& s = samples.mse[i];
        pairs.features.col(idx) = features(s.query_id, s.doc_id);
        pairs.targets[idx] = s.teacher_score;
        pairs.query_ids.push_back(&s.query_id);
        pairs.doc_ids.push_back(&s.doc_id);
      }
    }
  }

  const std::int64_t batches_per_epoch =
      static_cast<std::int64_t>((n + static_cast<std::size_t>(config.batch_size) - 1) /
                                static_cast<std::size_t>(config.batch_size));
  const std::int64_t total_steps = batches_per_epoch * config.epochs;

  AdamW optimizer(model.parameter_count(), {.weight_decay = config.weight_decay});
  Rng rng = Rng(config.seed).fork("train-shuffle");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainLog log;
  std::int64_t step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    std::int64_t epoch_batches = 0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(config.batch_size));
      const std::size_t count = stop - start;
      const double lr = lr_at(config, step, total_steps);
      double batch_loss = 0.0;
      Vector grad = Vector::Zero(model.parameter_count());

      if (samples.kind == LossKind::ranknet) {
        for (std::size_t b = start; b < stop; ++b) {
          const auto& block = lists.features[order[b]];
          const Vector scores = model.forward_batch(block);
          auto list_grad = ranknet_loss_grad(scores);
          batch_loss += list_grad.loss;
          const Vector upstream = list_grad.grad / static_cast<double>(count);
          grad += model.backward(block, upstream);
        }
      } else {
        Matrix batch_features(f, static_cast<Eigen::Index>(count));
        Vector upstream(static_cast<Eigen::Index>(count));
        for (std::size_t b = start; b < stop; ++b) {
          const auto idx = static_cast<Eigen::Index>(order[b]);
          const auto col = static_cast<Eigen::Index>(b - start);
          batch_features.col(col) = pairs.features.col(idx);
          const double score = model.forward(pairs.features.col(idx));
          const LossGrad lg = samples.kind == LossKind::bce
                                  ? bce_loss_grad(score, static_cast<int>(pairs.targets[idx]))
                                  : mse_loss_grad(score, pairs.targets[idx]);
          batch_loss += lg.loss;
          upstream[col] = lg.grad / static_cast<double>(count);
        }
        grad += model.backward(batch_features, upstream);
      }

      batch_loss /= static_cast<double>(count);
      if (!std::isfinite(batch_loss)) {
        std::string ids;
        for (std::size_t b = start; b < stop && b < start + 8; ++b) {
          const auto i = order[b];
          ids += ' ';
          ids += samples.kind == LossKind::ranknet ? *lists.query_ids[i]
                                                   : *pairs.query_ids[i] + "/" + *pairs.doc_ids[i];
        }
        throw IntegrityError("non-finite loss at step " + std::to_string(step) + ", batch ids:" +
                             ids);
      }
      optimizer.step(model.parameters(), grad, lr);
      log.steps.push_back({epoch, step, lr, batch_loss});
      epoch_loss_sum += batch_loss;
      ++epoch_batches;
      ++step;
    }
    log.epoch_loss.push_back(epoch_loss_sum / static_cast<double>(epoch_batches));
  }
  return {std::move(model), std::move(log)};
}

void save_loss_log(const TrainLog& log, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "epoch,step,lr,loss\n";
  for (const auto& row : log.steps) {
    out << row.epoch << ',' << row.step << ',' << format_double(row.lr) << ','
        << format_double(row.loss) << '\n';
  }
}

}  // namespace ranklab
