#include "ranklab/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "ranklab/parallel.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/run_file.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

using nlohmann::json;

std::string to_string(RetrieverKind kind) {
  switch (kind) {
    case RetrieverKind::bm25: return "bm25";
    case RetrieverKind::dense: return "dense";
    case RetrieverKind::sparse: return "sparse";
  }
  throw IntegrityError("unknown retriever kind");
}

RetrieverKind retriever_kind_from_string(const std::string& text) {
  if (text == "bm25") return RetrieverKind::bm25;
  if (text == "dense") return RetrieverKind::dense;
  if (text == "sparse") return RetrieverKind::sparse;
  throw ParseError("unknown retriever '" + text + "' (expected bm25, dense or sparse)");
}

RetrieverStack::RetrieverStack(const Corpus& corpus, std::optional<InvertedIndex> index)
    : corpus_(&corpus), extractor_(std::make_unique<FeatureExtractor>(corpus)) {
  InvertedIndex built = index.has_value() ? std::move(*index)
                                          : InvertedIndex::build(corpus, extractor_->doc_tokens());
  bm25_ = std::make_unique<Bm25Retriever>(corpus, std::move(built));
}

void RetrieverStack::attach_embeddings(EmbeddingTable table) {
  embeddings_ = std::make_unique<EmbeddingTable>(std::move(table));
  dense_ = std::make_unique<DenseRetriever>(*corpus_, *embeddings_);
}

void RetrieverStack::attach_expansion(SparseExpansionModel model) {
  expansion_ = std::make_unique<SparseExpansionModel>(std::move(model));
  sparse_ = std::make_unique<SparseRetriever>(*corpus_, *expansion_);
}

const Retriever& RetrieverStack::retriever(RetrieverKind kind) const {
  switch (kind) {
    case RetrieverKind::bm25: return *bm25_;
    case RetrieverKind::dense:
      if (!dense_) throw IntegrityError("dense retriever requested but no embeddings attached");
      return *dense_;
    case RetrieverKind::sparse:
      if (!sparse_) throw IntegrityError("sparse retriever requested but no expansion attached");
      return *sparse_;
  }
  throw IntegrityError("unknown retriever kind");
}

std::vector<const Retriever*> RetrieverStack::all_retrievers() const {
  if (!dense_ || !sparse_) {
    throw IntegrityError("candidate mining needs bm25, dense and sparse retrievers attached");
  }
  return {bm25_.get(), dense_.get(), sparse_.get()};
}

SignalProvider RetrieverStack::signals() const {
  return SignalProvider{bm25_.get(), dense_.get(), sparse_.get()};
}

void PipelineConfig::validate() const {
  if (k == 0 || k > k0) throw IntegrityError("rerank depth k must satisfy 1 <= k <= k0");
  if (query_cap == 0) throw IntegrityError("query cap must be at least 1");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

BenchmarkManifest BenchmarkManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifest " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  const std::filesystem::path base = path.parent_path();
  BenchmarkManifest manifest;
  try {
    manifest.config.k0 = root.value("k0", std::size_t{100});
    manifest.config.k = root.value("k", std::size_t{10});
    manifest.config.query_cap = root.value("query_cap", std::size_t{1000});
    manifest.config.retriever = retriever_kind_from_string(root.value("retriever", "bm25"));
    manifest.config.seed = root.value("seed", std::uint64_t{0});
    for (const auto& entry : root.at("datasets")) {
      DatasetPaths paths;
      paths.name = entry.at("name").get<std::string>();
      paths.group = entry.value("group", paths.name);
      paths.corpus = resolve(base, entry.at("corpus").get<std::string>());
      paths.queries = resolve(base, entry.at("queries").get<std::string>());
      paths.qrels = resolve(base, entry.at("qrels").get<std::string>());
      paths.embeddings = resolve(base, entry.value("embeddings", ""));
      paths.expansion = resolve(base, entry.value("expansion", ""));
      manifest.datasets.push_back(std::move(paths));
    }
  } catch (const json::exception& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  manifest.config.validate();
  return manifest;
}

void BenchmarkManifest::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  json root;
  root["k0"] = config.k0;
  root["k"] = config.k;
  root["query_cap"] = config.query_cap;
  root["retriever"] = to_string(config.retriever);
  root["seed"] = config.seed;
  json list = json::array();
  for (const auto& d : datasets) {
    json entry;
    entry["name"] = d.name;
    entry["group"] = d.group;
    entry["corpus"] = d.corpus.string();
    entry["queries"] = d.queries.string();
    entry["qrels"] = d.qrels.string();
    if (!d.embeddings.empty()) entry["embeddings"] = d.embeddings.string();
    if (!d.expansion.empty()) entry["expansion"] = d.expansion.string();
    list.push_back(std::move(entry));
  }
  root["datasets"] = std::move(list);
  out << root.dump(2) << '\n';
}

BenchmarkEntry load_benchmark_entry(const DatasetPaths& paths) {
  BenchmarkEntry entry;
  entry.dataset.name = paths.name;
  entry.dataset.group = paths.group;
  entry.dataset.corpus = load_corpus(paths.corpus);
  entry.dataset.queries = load_queries(paths.queries);
  entry.dataset.qrels = load_qrels(paths.qrels);
  if (!paths.embeddings.empty()) {
    entry.embeddings = std::make_unique<EmbeddingTable>(EmbeddingTable::load(paths.embeddings));
  }
  if (!paths.expansion.empty()) {
    entry.expansion =
        std::make_unique<SparseExpansionModel>(SparseExpansionModel::load(paths.expansion));
  }
  return entry;
}

FeatureProvider make_pool_feature_provider(const std::vector<Query>& queries,
                                           const std::vector<CandidatePool>& pools,
                                           const RetrieverStack& stack) {
  struct State {
    std::unordered_map<std::string, const Query*> query_by_id;
    std::unordered_map<std::string, std::unordered_map<std::string, int>> best_rank;
    std::unordered_map<std::string, FeatureExtractor::PreparedQuery> prepared;
    const FeatureExtractor* extractor;
    SignalProvider signals;
  };
  auto state = std::make_shared<State>();
  state->extractor = &stack.extractor();
  state->signals = stack.signals();
  for (const auto& q : queries) state->query_by_id[q.query_id] = &q;
  for (const auto& pool : pools) {
    auto& ranks = state->best_rank[pool.query_id];
    for (const auto& candidate : pool.candidates) {
      ranks[candidate.doc_id] = candidate.best_rank();
    }
  }
  return [state](const std::string& query_id, const std::string& doc_id) -> Vector {
    const auto query_it = state->query_by_id.find(query_id);
    if (query_it == state->query_by_id.end()) {
      throw IntegrityError("sample references unknown query '" + query_id + "'");
    }
    const auto pool_it = state->best_rank.find(query_id);
    if (pool_it == state->best_rank.end()) {
      throw IntegrityError("sample pair (" + query_id + ", " + doc_id + ") was never mined");
    }
    const auto rank_it = pool_it->second.find(doc_id);
    if (rank_it == pool_it->second.end()) {
      throw IntegrityError("sample pair (" + query_id + ", " + doc_id + ") was never mined");
    }
    auto [cache_it, inserted] = state->prepared.try_emplace(query_id);
    if (inserted) cache_it->second = state->extractor->prepare(*query_it->second);
    return state->extractor->extract(
        cache_it->second, doc_id,
        state->signals.at(*query_it->second, doc_id, rank_it->second));
  };
}

BenchmarkOutput run_benchmark(const PipelineConfig& config, std::vector<BenchmarkEntry> entries,
                              const ScorerFactory& make_scorer) {
  config.validate();
  if (entries.empty()) throw IntegrityError("benchmark needs at least one dataset");
  BenchmarkOutput out;
  for (auto& entry : entries) {
    const std::string& name = entry.dataset.name;
    try {
      validate_dataset(entry.dataset);
      Dataset ds = cap_queries(std::move(entry.dataset), config.query_cap);
      RetrieverStack stack(ds.corpus);
      if (entry.embeddings) stack.attach_embeddings(std::move(*entry.embeddings));
      if (entry.expansion) stack.attach_expansion(std::move(*entry.expansion));
      const Retriever& primary = stack.retriever(config.retriever);

      DatasetRun run;
      run.dataset = ds.name;
      run.stage1.resize(ds.queries.size());
      parallel_for(ds.queries.size(), config.threads, [&](std::size_t i) {
        run.stage1[i] = retrieve_topk(primary, ds.queries[i], config.k0);
      });

      std::unique_ptr<PairScorer> scorer;
      if (make_scorer) scorer = make_scorer(ds, stack);
      if (!scorer) scorer = std::make_unique<PassthroughScorer>(primary.tag());
      if (out.model_tag.empty()) {
        out.model_tag = scorer->tag();
      } else if (out.model_tag != scorer->tag()) {
        throw IntegrityError("scorer tag changed between datasets: '" + out.model_tag +
                             "' vs '" + scorer->tag() + "'");
      }

      run.reranked.resize(ds.queries.size());
      parallel_for(ds.queries.size(), config.threads, [&](std::size_t i) {
        run.reranked[i] =
            rerank(*scorer, RerankRequest{ds.queries[i], run.stage1[i], config.k}, ds.corpus);
      });

      run.stage1_eval = evaluate_run(run.stage1, ds, config.k);
      run.reranked_eval = evaluate_run(run.reranked, ds, config.k);
      out.groups.emplace_back(ds.name, ds.group);
      out.baseline.emplace_back(ds.name, run.stage1_eval.mean_ndcg);
      out.model.emplace_back(ds.name, run.reranked_eval.mean_ndcg);
      out.runs.push_back(std::move(run));
    } catch (const ParseError& e) {
      throw ParseError("dataset '" + name + "': " + e.what());
    } catch (const IntegrityError& e) {
      throw IntegrityError("dataset '" + name + "': " + e.what());
    }
  }
  out.baseline_report = aggregate(out.baseline, out.baseline, out.groups);
  out.model_report = aggregate(out.model, out.baseline, out.groups);
  return out;
}

void ExperimentSpec::validate() const {
  synthetic.validate();
  if (teacher_hidden < 1) throw IntegrityError("teacher hidden size must be positive");
  if (teacher_scale <= 0.0) throw IntegrityError("teacher weight scale must be positive");
  if (per_retriever_k == 0) throw IntegrityError("mining depth must be at least 1");
  if (list_length < 2) throw IntegrityError("permutation lists need at least 2 documents");
  if (k == 0 || k > k0) throw IntegrityError("rerank depth k must satisfy 1 <= k <= k0");
  if (top_fraction <= 0.0 || mid_fraction < 0.0 || top_fraction + mid_fraction >= 1.0) {
    throw IntegrityError("grade fractions must be positive and sum below 1");
  }
  if (mse_student.loss != LossKind::mse || ranknet_student.loss != LossKind::ranknet) {
    throw IntegrityError("student specs must keep their loss kinds");
  }
  if (mse_student.hidden < 1 || ranknet_student.hidden < 1) {
    throw IntegrityError("student hidden sizes must be positive");
  }
}

namespace {

// Folds per-feature standardization (x - mu) / sigma into the first layer,
// so the checkpoint operates on raw features like every other scorer.
void fold_standardization(MlpScorer& model, const Vector& mu, const Vector& sigma) {
  const int f = model.feature_count();
  const int h = model.hidden_size();
  Vector& theta = model.parameters();
  Eigen::Map<Matrix> w1(theta.data(), h, f);
  Eigen::Map<Vector> b1(theta.data() + static_cast<std::ptrdiff_t>(h) * f, h);
  for (int j = 0; j < f; ++j) {
    b1 -= w1.col(j) * (mu[j] / sigma[j]);
    w1.col(j) /= sigma[j];
  }
}

struct EvalSlot {
  RankedList stage1;
  std::vector<double> teacher_scores;  // aligned with stage1 entries
  RankedList teacher_run;
  RankedList mse_run;
  RankedList ranknet_run;
  double mse_tau = 0.0;
  double ranknet_tau = 0.0;
};

RankedList rescore(const std::string& query_id, const std::vector<ScoredDoc>& candidates,
                   const std::vector<double>& scores, std::size_t k, std::string tag) {
  std::vector<ScoredDoc> rescored(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    rescored[i] = {candidates[i].doc_id, scores[i]};
  }
  return RankedList{query_id, rank_entries(std::move(rescored), k), std::move(tag)};
}

}  // namespace

ExperimentResult run_distillation_experiment(const ExperimentSpec& spec,
                                             const std::filesystem::path& out_dir) {
  spec.validate();
  const Rng master(spec.seed);

  SyntheticSpec syn = spec.synthetic;
  syn.seed = master.fork("synthetic").next_u64();
  SyntheticData data = generate_synthetic(syn);

  RetrieverStack stack(data.corpus);
  stack.attach_embeddings(std::move(data.embeddings));
  stack.attach_expansion(std::move(data.expansion));
  const auto miners = stack.all_retrievers();
  const SignalProvider signals = stack.signals();
  const FeatureExtractor& extractor = stack.extractor();

  // Mine training candidates.
  std::vector<CandidatePool> pools(data.train_queries.size());
  parallel_for(pools.size(), spec.threads, [&](std::size_t i) {
    pools[i] = mine_candidates(data.train_queries[i],
                               std::span<const Retriever* const>(miners), spec.per_retriever_k);
  });

  // Feature moments over the mined pairs; the hidden teacher is drawn in
  // standardized feature space so every signal carries weight, then folded
  // back onto raw features.
  Vector mu = Vector::Zero(kFeatureCount);
  Vector m2 = Vector::Zero(kFeatureCount);
  std::size_t moment_count = 0;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const Query& query = data.train_queries[i];
    const auto prepared = extractor.prepare(query);
    for (const auto& candidate : pools[i].candidates) {
      const Vector x = extractor.extract(
          prepared, candidate.doc_id, signals.at(query, candidate.doc_id, candidate.best_rank()));
      mu += x;
      m2 += x.cwiseProduct(x);
      ++moment_count;
    }
  }
  if (moment_count == 0) throw IntegrityError("mining produced no candidate pairs");
  mu /= static_cast<double>(moment_count);
  Vector sigma = (m2 / static_cast<double>(moment_count) - mu.cwiseProduct(mu))
                     .cwiseMax(0.0)
                     .cwiseSqrt();
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    if (sigma[j] < 1e-12) sigma[j] = 1.0;
  }

  Rng teacher_rng = master.fork("teacher");
  MlpScorer teacher_model =
      MlpScorer::random_init(kFeatureCount, spec.teacher_hidden, teacher_rng, spec.teacher_scale);
  teacher_model.tag = "teacher";
  fold_standardization(teacher_model, mu, sigma);
  const MlpTeacher teacher(teacher_model, extractor);

  // Teacher scores over the pools, then the two training sets.
  TeacherScores scores;
  scores.teacher_tag = teacher.tag();
  for (std::size_t i = 0; i < pools.size(); ++i) {
    score_pool(teacher, data.train_queries[i], pools[i], signals, scores);
  }
  TrainingSet mse_set = build_mse_set(scores);
  PermutationSetResult ranknet_built = build_permutation_set(scores, spec.list_length);

  const FeatureProvider provider =
      make_pool_feature_provider(data.train_queries, pools, stack);

  auto train_student = [&](const StudentSpec& student, const TrainingSet& set,
                           const char* tag, const char* stream) {
    Rng init_rng = master.fork(std::string("init-") + stream);
    MlpScorer model =
        MlpScorer::random_init(kFeatureCount, student.hidden, init_rng, student.init_scale);
    model.tag = tag;
    TrainConfig config = student.train;
    config.seed = master.fork(std::string("train-") + stream).next_u64();
    return train(std::move(model), set, config, provider);
  };
  TrainResult mse_result = train_student(spec.mse_student, mse_set, "student-mse", "mse");
  TrainResult ranknet_result =
      train_student(spec.ranknet_student, ranknet_built.set, "student-ranknet", "ranknet");

  // Held-out evaluation: grades are teacher-score quantiles over the actual
  // stage-1 candidates, so an exact teacher ordering is the NDCG ceiling.
  const Retriever& primary = stack.retriever(spec.primary);
  const MlpPairScorer teacher_scorer(teacher_model, extractor, signals);
  const MlpPairScorer mse_scorer(mse_result.model, extractor, signals);
  const MlpPairScorer ranknet_scorer(ranknet_result.model, extractor, signals);

  std::vector<EvalSlot> slots(data.eval_queries.size());
  parallel_for(slots.size(), spec.threads, [&](std::size_t i) {
    const Query& query = data.eval_queries[i];
    EvalSlot& slot = slots[i];
    slot.stage1 = retrieve_topk(primary, query, spec.k0);
    slot.teacher_scores = teacher_scorer.score_candidates(query, slot.stage1.entries);
    const std::vector<double> mse_scores = mse_scorer.score_candidates(query, slot.stage1.entries);
    const std::vector<double> ranknet_scores =
        ranknet_scorer.score_candidates(query, slot.stage1.entries);
    slot.teacher_run =
        rescore(query.query_id, slot.stage1.entries, slot.teacher_scores, spec.k, "teacher");
    slot.mse_run = rescore(query.query_id, slot.stage1.entries, mse_scores, spec.k, "student-mse");
    slot.ranknet_run =
        rescore(query.query_id, slot.stage1.entries, ranknet_scores, spec.k, "student-ranknet");
    slot.mse_tau = kendall_tau(mse_scores, slot.teacher_scores);
    slot.ranknet_tau = kendall_tau(ranknet_scores, slot.teacher_scores);
  });

  Dataset eval_ds;
  eval_ds.name = "synthetic";
  eval_ds.group = "synthetic";
  eval_ds.queries = data.eval_queries;
  std::vector<RankedList> stage1_run, teacher_run, mse_run, ranknet_run;
  double mse_tau_sum = 0.0, ranknet_tau_sum = 0.0;
  for (auto& slot : slots) {
    const std::size_t n = slot.stage1.entries.size();
    const auto graded = rescore(slot.stage1.query_id, slot.stage1.entries, slot.teacher_scores,
                                n, "grading");
    const auto top = static_cast<std::size_t>(
        std::ceil(spec.top_fraction * static_cast<double>(n)));
    const auto mid = static_cast<std::size_t>(
        std::ceil(spec.mid_fraction * static_cast<double>(n)));
    for (std::size_t r = 0; r < n; ++r) {
      const int grade = r < top ? 2 : (r < top + mid ? 1 : 0);
      eval_ds.qrels.add(slot.stage1.query_id, graded.entries[r].doc_id, grade);
    }
    mse_tau_sum += slot.mse_tau;
    ranknet_tau_sum += slot.ranknet_tau;
    stage1_run.push_back(std::move(slot.stage1));
    teacher_run.push_back(std::move(slot.teacher_run));
    mse_run.push_back(std::move(slot.mse_run));
    ranknet_run.push_back(std::move(slot.ranknet_run));
  }

  const RunEvaluation baseline_eval = evaluate_run(stage1_run, eval_ds, spec.k);
  const RunEvaluation teacher_eval = evaluate_run(teacher_run, eval_ds, spec.k);
  const RunEvaluation mse_eval = evaluate_run(mse_run, eval_ds, spec.k);
  const RunEvaluation ranknet_eval = evaluate_run(ranknet_run, eval_ds, spec.k);

  ExperimentResult result;
  result.seed = spec.seed;
  result.k = spec.k;
  result.baseline_ndcg = baseline_eval.mean_ndcg;
  result.teacher_ndcg = teacher_eval.mean_ndcg;
  result.mse_ndcg = mse_eval.mean_ndcg;
  result.ranknet_ndcg = ranknet_eval.mean_ndcg;
  result.mse_tau = mse_tau_sum / static_cast<double>(slots.size());
  result.ranknet_tau = ranknet_tau_sum / static_cast<double>(slots.size());
  result.evaluated = baseline_eval.evaluated;
  result.skipped = baseline_eval.skipped;
  result.train_pairs = mse_set.size();
  result.train_lists = ranknet_built.set.size();
  result.mse_final_loss = mse_result.log.epoch_loss.back();
  result.ranknet_final_loss = ranknet_result.log.epoch_loss.back();

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    save_corpus(data.corpus, out_dir / "corpus.jsonl");
    save_queries(data.train_queries, out_dir / "queries-train.jsonl");
    save_queries(data.eval_queries, out_dir / "queries-eval.jsonl");
    stack.embeddings()->save(out_dir / "embeddings.jsonl");
    stack.expansion()->save(out_dir / "expansion.jsonl");
    save_pools(pools, out_dir / "pools.jsonl");
    scores.save_tsv(out_dir / "teacher-scores.tsv");
    save_samples(mse_set, out_dir / "samples-mse.jsonl");
    save_samples(ranknet_built.set, out_dir / "samples-ranknet.jsonl");
    teacher_model.save(out_dir / "checkpoint-teacher.json");
    mse_result.model.save(out_dir / "checkpoint-mse.json");
    ranknet_result.model.save(out_dir / "checkpoint-ranknet.json");
    save_loss_log(mse_result.log, out_dir / "loss-mse.csv");
    save_loss_log(ranknet_result.log, out_dir / "loss-ranknet.csv");
    save_qrels(eval_ds.qrels, out_dir / "qrels-eval.tsv");
    save_run(stage1_run, out_dir / "run-retriever.trec");
    save_run(teacher_run, out_dir / "run-teacher.trec");
    save_run(mse_run, out_dir / "run-mse.trec");
    save_run(ranknet_run, out_dir / "run-ranknet.trec");
    save_experiment_report(result, out_dir / "report.json");
    std::ofstream table(out_dir / "table.txt", std::ios::binary);
    table << render_experiment_table(result);
  }
  return result;
}

std::string render_experiment_table(const ExperimentResult& result) {
  std::ostringstream out;
  const std::string metric = "NDCG@" + std::to_string(result.k);
  out << std::left << std::setw(18) << "System" << std::right << std::setw(10) << metric
      << std::setw(14) << "Kendall-tau" << '\n';
  out << std::fixed << std::setprecision(4);
  auto row = [&](const char* name, double ndcg, double tau, bool has_tau) {
    out << std::left << std::setw(18) << name << std::right << std::setw(10) << ndcg;
    if (has_tau) {
      out << std::setw(14) << tau;
    } else {
      out << std::setw(14) << "-";
    }
    out << '\n';
  };
  row("retriever", result.baseline_ndcg, 0.0, false);
  row("student-mse", result.mse_ndcg, result.mse_tau, true);
  row("student-ranknet", result.ranknet_ndcg, result.ranknet_tau, true);
  row("teacher", result.teacher_ndcg, 0.0, false);
  return out.str();
}

void save_experiment_report(const ExperimentResult& result, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  json root;
  root["seed"] = result.seed;
  root["k"] = result.k;
  root["ndcg"] = {{"retriever", result.baseline_ndcg},
                  {"student-mse", result.mse_ndcg},
                  {"student-ranknet", result.ranknet_ndcg},
                  {"teacher", result.teacher_ndcg}};
  root["kendall_tau"] = {{"student-mse", result.mse_tau},
                         {"student-ranknet", result.ranknet_tau}};
  root["queries"] = {{"evaluated", result.evaluated}, {"skipped", result.skipped}};
  root["training"] = {{"pairs", result.train_pairs},
                      {"lists", result.train_lists},
                      {"mse_final_loss", result.mse_final_loss},
                      {"ranknet_final_loss", result.ranknet_final_loss}};
  out << root.dump(2) << '\n';
}

}  // namespace ranklab
