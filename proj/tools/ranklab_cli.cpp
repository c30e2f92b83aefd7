#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ranklab/corpus.hpp"
#include "ranklab/distill.hpp"
#include "ranklab/eval.hpp"
#include "ranklab/features.hpp"
#include "ranklab/index.hpp"
#include "ranklab/parallel.hpp"
#include "ranklab/pipeline.hpp"
#include "ranklab/reranker.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/run_file.hpp"
#include "ranklab/scorer.hpp"
#include "ranklab/synthetic.hpp"
#include "ranklab/train.hpp"
#include "ranklab/types.hpp"

namespace {

using namespace ranklab;
using nlohmann::json;

namespace fs = std::filesystem;

int resolve_threads(int threads) { return threads <= 0 ? default_threads() : threads; }

// CLI11 applies config files only when attached to the root command, so a
// subcommand's --config INI is expanded into ordinary tokens before parsing.
// Keys already present on the command line win; injected tokens land at the
// end, inside the parsed subcommand's scope.
std::vector<std::string> expand_config_tokens(std::vector<std::string> args) {
  std::string config_path;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& token = args[i];
    if (token == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
      continue;
    }
    if (token.rfind("--config=", 0) == 0) {
      config_path = token.substr(9);
      continue;
    }
    out.push_back(token);
  }
  if (config_path.empty()) return out;

  std::set<std::string> present;
  for (const auto& token : out) {
    if (token.rfind("--", 0) != 0 || token.size() <= 2) continue;
    present.insert(token.substr(2, token.find('=') - 2));
  }

  CLI::ConfigINI ini;
  for (const auto& item : ini.from_file(config_path)) {
    std::string name = item.name;
    for (auto it = item.parents.rbegin(); it != item.parents.rend(); ++it) {
      name = *it + "." + name;
    }
    if (present.count(name) > 0) continue;
    if (item.inputs.empty()) {
      out.push_back("--" + name);
    } else {
      for (const auto& value : item.inputs) out.push_back("--" + name + "=" + value);
    }
  }
  return out;
}

void cap_in_place(std::vector<Query>& queries, std::size_t cap) {
  if (cap > 0 && queries.size() > cap) queries.resize(cap);
}

std::unordered_map<std::string, const Query*> query_map(const std::vector<Query>& queries) {
  std::unordered_map<std::string, const Query*> map;
  for (const auto& q : queries) {
    if (!map.emplace(q.query_id, &q).second) {
      throw IntegrityError("duplicate query id '" + q.query_id + "'");
    }
  }
  return map;
}

const Query& require_query(const std::unordered_map<std::string, const Query*>& map,
                           const std::string& query_id) {
  const auto it = map.find(query_id);
  if (it == map.end()) {
    throw IntegrityError("query '" + query_id + "' not found in the query file");
  }
  return *it->second;
}

// Corpus behind a stable address so RetrieverStack references survive moves.
struct LoadedStack {
  std::unique_ptr<Corpus> corpus;
  std::unique_ptr<RetrieverStack> stack;
};

LoadedStack load_stack(const fs::path& corpus_path, const fs::path& index_path,
                       const fs::path& embeddings_path, const fs::path& expansion_path) {
  LoadedStack out;
  out.corpus = std::make_unique<Corpus>(load_corpus(corpus_path));
  std::optional<InvertedIndex> index;
  if (!index_path.empty()) index = InvertedIndex::load(index_path);
  out.stack = std::make_unique<RetrieverStack>(*out.corpus, std::move(index));
  if (!embeddings_path.empty()) {
    out.stack->attach_embeddings(EmbeddingTable::load(embeddings_path));
  }
  if (!expansion_path.empty()) {
    out.stack->attach_expansion(SparseExpansionModel::load(expansion_path));
  }
  return out;
}

// ---------------------------------------------------------------- index ----

struct IndexOpts {
  fs::path corpus;
  fs::path out;
};

void run_index(const IndexOpts& opts) {
  const Corpus corpus = load_corpus(opts.corpus);
  const InvertedIndex index = InvertedIndex::build(corpus);
  index.save(opts.out);
  std::cout << "index: " << index.doc_count() << " documents, avgdl "
            << format_double(index.avg_doc_length()) << " -> " << opts.out.string() << '\n';
}

// -------------------------------------------------------------- retrieve ----

struct RetrieveOpts {
  fs::path corpus;
  fs::path queries;
  fs::path index;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  std::string retriever = "bm25";
  std::size_t k0 = 100;
  std::size_t query_cap = 1000;
  int threads = 0;
};

void run_retrieve(const RetrieveOpts& opts) {
  const LoadedStack loaded =
      load_stack(opts.corpus, opts.index, opts.embeddings, opts.expansion);
  std::vector<Query> queries = load_queries(opts.queries);
  cap_in_place(queries, opts.query_cap);
  const Retriever& retriever =
      loaded.stack->retriever(retriever_kind_from_string(opts.retriever));
  std::vector<RankedList> run(queries.size());
  parallel_for(queries.size(), resolve_threads(opts.threads), [&](std::size_t i) {
    run[i] = retrieve_topk(retriever, queries[i], opts.k0);
  });
  save_run(run, opts.out);
  std::cout << "retrieve: " << run.size() << " ranked lists (" << retriever.tag() << ", k0="
            << opts.k0 << ") -> " << opts.out.string() << '\n';
}

// ------------------------------------------------------------------ mine ----

struct MineOpts {
  fs::path corpus;
  fs::path queries;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  std::size_t per_retriever_k = 16;
  std::size_t query_cap = 0;
  int threads = 0;
};

void run_mine(const MineOpts& opts) {
  const LoadedStack loaded = load_stack(opts.corpus, {}, opts.embeddings, opts.expansion);
  std::vector<Query> queries = load_queries(opts.queries);
  cap_in_place(queries, opts.query_cap);
  const auto retrievers = loaded.stack->all_retrievers();
  std::vector<CandidatePool> pools(queries.size());
  parallel_for(queries.size(), resolve_threads(opts.threads), [&](std::size_t i) {
    pools[i] = mine_candidates(queries[i], std::span<const Retriever* const>(retrievers),
                               opts.per_retriever_k);
  });
  save_pools(pools, opts.out);
  std::size_t pairs = 0;
  for (const auto& pool : pools) pairs += pool.candidates.size();
  std::cout << "mine: " << pools.size() << " pools, " << pairs << " candidate pairs (<= "
            << 3 * opts.per_retriever_k << " per query) -> " << opts.out.string() << '\n';
}

// --------------------------------------------------------- teacher-score ----

struct TeacherScoreOpts {
  fs::path corpus;
  fs::path queries;
  fs::path pools;
  fs::path checkpoint;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  fs::path samples_mse_out;
  fs::path samples_ranknet_out;
  fs::path samples_bce_out;
  fs::path qrels;
  std::size_t list_length = 20;
  std::size_t negatives_per_positive = 4;
  std::uint64_t seed = 0;
};

void run_teacher_score(const TeacherScoreOpts& opts) {
  const LoadedStack loaded = load_stack(opts.corpus, {}, opts.embeddings, opts.expansion);
  const std::vector<Query> queries = load_queries(opts.queries);
  const auto by_id = query_map(queries);
  const std::vector<CandidatePool> pools = load_pools(opts.pools);
  const MlpScorer model = MlpScorer::load(opts.checkpoint);
  const MlpTeacher teacher(model, loaded.stack->extractor());
  const SignalProvider signals = loaded.stack->signals();

  TeacherScores scores;
  scores.teacher_tag = teacher.tag();
  for (const auto& pool : pools) {
    score_pool(teacher, require_query(by_id, pool.query_id), pool, signals, scores);
  }
  scores.save_tsv(opts.out);
  std::cout << "teacher-score: " << scores.pair_count() << " pairs over "
            << scores.query_order().size() << " queries -> " << opts.out.string() << '\n';

  if (!opts.samples_mse_out.empty()) {
    const TrainingSet set = build_mse_set(scores);
    save_samples(set, opts.samples_mse_out);
    std::cout << "teacher-score: " << set.size() << " mse samples -> "
              << opts.samples_mse_out.string() << '\n';
  }
  if (!opts.samples_ranknet_out.empty()) {
    const PermutationSetResult built = build_permutation_set(scores, opts.list_length);
    save_samples(built.set, opts.samples_ranknet_out);
    std::cout << "teacher-score: " << built.set.size() << " ranknet lists ("
              << built.skipped_queries << " skipped) -> " << opts.samples_ranknet_out.string()
              << '\n';
  }
  if (!opts.samples_bce_out.empty()) {
    if (opts.qrels.empty()) {
      throw IntegrityError("--samples-bce-out needs --qrels for the positive labels");
    }
    const Qrels qrels = load_qrels(opts.qrels);
    Rng rng = Rng(opts.seed).fork("bce-negatives");
    const TrainingSet set = build_bce_set(pools, qrels, opts.negatives_per_positive, rng);
    save_samples(set, opts.samples_bce_out);
    std::cout << "teacher-score: " << set.size() << " bce samples -> "
              << opts.samples_bce_out.string() << '\n';
  }
}

// ----------------------------------------------------------------- train ----

struct TrainOpts {
  fs::path samples;
  fs::path corpus;
  fs::path queries;
  fs::path pools;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  fs::path loss_log;
  std::string loss;
  std::string schedule = "linear_decay";
  std::string tag = "mlp";
  int epochs = 10;
  int batch_size = 32;
  double lr = 1e-5;
  double weight_decay = 0.01;
  double init_scale = 0.5;
  int hidden = 16;
  std::uint64_t seed = 0;
};

void run_train(const TrainOpts& opts) {
  const TrainingSet samples = load_samples(opts.samples);
  const LossKind requested = loss_kind_from_string(opts.loss);
  if (samples.kind != requested) {
    throw IntegrityError("sample file holds " + to_string(samples.kind) +
                         " samples but --loss asked for " + to_string(requested));
  }
  const LoadedStack loaded = load_stack(opts.corpus, {}, opts.embeddings, opts.expansion);
  const std::vector<Query> queries = load_queries(opts.queries);
  const std::vector<CandidatePool> pools = load_pools(opts.pools);
  const FeatureProvider provider = make_pool_feature_provider(queries, pools, *loaded.stack);

  Rng init_rng = Rng(opts.seed).fork("init");
  MlpScorer model = MlpScorer::random_init(kFeatureCount, opts.hidden, init_rng, opts.init_scale);
  model.tag = opts.tag;
  TrainConfig config;
  config.epochs = opts.epochs;
  config.batch_size = opts.batch_size;
  config.peak_lr = opts.lr;
  config.schedule = schedule_from_string(opts.schedule);
  config.seed = opts.seed;
  config.weight_decay = opts.weight_decay;

  TrainResult result = train(std::move(model), samples, config, provider);
  result.model.save(opts.out);
  if (!opts.loss_log.empty()) save_loss_log(result.log, opts.loss_log);
  std::cout << "train: " << to_string(samples.kind) << ", " << samples.size() << " samples, "
            << opts.epochs << " epochs, final epoch loss "
            << format_double(result.log.epoch_loss.back()) << " -> " << opts.out.string() << '\n';
}

// ---------------------------------------------------------------- rerank ----

struct RerankOpts {
  fs::path corpus;
  fs::path queries;
  fs::path run;
  fs::path checkpoint;
  fs::path qrels;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  std::size_t k = 10;
  bool passthrough = false;
  bool oracle = false;
  bool oracle_negated = false;
  int threads = 0;
};

void run_rerank(const RerankOpts& opts) {
  const std::vector<RankedList> run = load_run(opts.run);
  if (run.empty()) throw IntegrityError("input run is empty");
  const std::vector<Query> queries = load_queries(opts.queries);
  const auto by_id = query_map(queries);

  LoadedStack loaded;
  std::optional<MlpScorer> model;
  Qrels qrels;
  std::unique_ptr<PairScorer> scorer;
  if (opts.passthrough) {
    loaded.corpus = std::make_unique<Corpus>(load_corpus(opts.corpus));
    scorer = std::make_unique<PassthroughScorer>(run.front().source_tag);
  } else if (opts.oracle || opts.oracle_negated) {
    loaded.corpus = std::make_unique<Corpus>(load_corpus(opts.corpus));
    qrels = load_qrels(opts.qrels);
    scorer = std::make_unique<QrelsOracleScorer>(qrels, opts.oracle_negated);
  } else {
    loaded = load_stack(opts.corpus, {}, opts.embeddings, opts.expansion);
    model = MlpScorer::load(opts.checkpoint);
    scorer = std::make_unique<MlpPairScorer>(*model, loaded.stack->extractor(),
                                             loaded.stack->signals());
  }

  std::vector<RankedList> reranked(run.size());
  parallel_for(run.size(), resolve_threads(opts.threads), [&](std::size_t i) {
    const Query& query = require_query(by_id, run[i].query_id);
    reranked[i] = rerank(*scorer, RerankRequest{query, run[i], opts.k}, *loaded.corpus);
  });
  save_run(reranked, opts.out);
  std::cout << "rerank: " << reranked.size() << " lists (" << scorer->tag() << ", k=" << opts.k
            << ") -> " << opts.out.string() << '\n';
}

// ------------------------------------------------------------------ eval ----

struct EvalOpts {
  fs::path run;
  fs::path queries;
  fs::path qrels;
  fs::path out;
  std::string name = "dataset";
  std::string gain = "linear";
  std::size_t k = 10;
};

GainMode gain_from_string(const std::string& text) {
  if (text == "linear") return GainMode::linear;
  if (text == "exponential") return GainMode::exponential;
  throw ParseError("unknown gain mode '" + text + "'");
}

void run_eval(const EvalOpts& opts) {
  const std::vector<RankedList> run = load_run(opts.run);
  Dataset dataset;
  dataset.name = opts.name;
  dataset.group = opts.name;
  dataset.queries = load_queries(opts.queries);
  dataset.qrels = load_qrels(opts.qrels);
  const RunEvaluation eval = evaluate_run(run, dataset, opts.k, gain_from_string(opts.gain));
  std::cout << "NDCG@" << opts.k << " mean=" << format_double(eval.mean_ndcg)
            << " evaluated=" << eval.evaluated << " skipped=" << eval.skipped << '\n';
  if (!opts.out.empty()) {
    json root;
    root["name"] = opts.name;
    root["k"] = opts.k;
    root["gain"] = opts.gain;
    root["mean_ndcg"] = eval.mean_ndcg;
    root["evaluated"] = eval.evaluated;
    root["skipped"] = eval.skipped;
    json per_query = json::object();
    for (const auto& q : eval.per_query) per_query[q.query_id] = q.ndcg;
    root["per_query"] = std::move(per_query);
    if (opts.out.has_parent_path()) fs::create_directories(opts.out.parent_path());
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) throw ParseError("cannot write " + opts.out.string());
    out << root.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------- report ----

struct ReportOpts {
  fs::path scores;
  fs::path out_dir;
};

void run_report(const ReportOpts& opts) {
  std::ifstream in(opts.scores, std::ios::binary);
  if (!in) throw ParseError("cannot open " + opts.scores.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ParseError("scores file " + opts.scores.string() + ": " + e.what());
  }

  std::string baseline_tag;
  GroupAssignment groups;
  std::map<std::string, DatasetScores> models;
  try {
    baseline_tag = root.at("baseline").get<std::string>();
    for (const auto& [dataset, group] : root.at("groups").items()) {
      groups.emplace_back(dataset, group.get<std::string>());
    }
    for (const auto& [tag, values] : root.at("models").items()) {
      DatasetScores scores;
      for (const auto& [dataset, value] : values.items()) {
        scores.emplace_back(dataset, value.get<double>());
      }
      models.emplace(tag, std::move(scores));
    }
  } catch (const json::exception& e) {
    throw ParseError("scores file " + opts.scores.string() + ": " + e.what());
  }
  const auto baseline_it = models.find(baseline_tag);
  if (baseline_it == models.end()) {
    throw IntegrityError("baseline tag '" + baseline_tag + "' is not among the models");
  }

  std::map<std::string, EvalReport> reports;
  std::vector<std::pair<std::string, EvalReport>> table_order;
  table_order.emplace_back(baseline_tag,
                           aggregate(baseline_it->second, baseline_it->second, groups));
  reports.emplace(baseline_tag, table_order.front().second);
  for (const auto& [tag, scores] : models) {
    if (tag == baseline_tag) continue;
    EvalReport report = aggregate(scores, baseline_it->second, groups);
    table_order.emplace_back(tag, report);
    reports.emplace(tag, std::move(report));
    save_chart_csv(compare_chart_data(scores, baseline_it->second),
                   opts.out_dir / ("chart-" + tag + ".csv"));
  }
  fs::create_directories(opts.out_dir);
  save_report_json(reports, baseline_tag, opts.out_dir / "report.json");
  const std::string table = render_report_table(table_order, baseline_tag);
  std::ofstream table_out(opts.out_dir / "table.txt", std::ios::binary);
  table_out << table;
  std::cout << table;
}

// ------------------------------------------------------------ experiment ----

struct ExperimentOpts {
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::size_t docs = 10000;
  std::size_t train_queries = 2000;
  std::size_t eval_queries = 500;
  std::size_t vocab = 2000;
  std::size_t topics = 50;
  int dim = 16;
  std::size_t k0 = 100;
  std::size_t k = 10;
  std::size_t per_retriever_k = 16;
  std::size_t list_length = 20;
  int teacher_hidden = 32;
  double teacher_scale = 1.5;
  int student_hidden = 16;
  double init_scale = 0.5;
  double mse_lr = 3e-3;
  int mse_epochs = 10;
  std::string mse_schedule = "linear_decay";
  double ranknet_lr = 1e-2;
  int ranknet_epochs = 20;
  std::string ranknet_schedule = "constant";
  int batch_size = 32;
  double weight_decay = 0.01;
  std::string primary = "bm25";
  int threads = 0;
};

ExperimentSpec build_experiment_spec(const ExperimentOpts& opts) {
  ExperimentSpec spec;
  spec.synthetic.doc_count = opts.docs;
  spec.synthetic.train_query_count = opts.train_queries;
  spec.synthetic.eval_query_count = opts.eval_queries;
  spec.synthetic.vocab_size = opts.vocab;
  spec.synthetic.topic_count = opts.topics;
  spec.synthetic.embedding_dim = opts.dim;
  spec.seed = opts.seed;
  spec.k0 = opts.k0;
  spec.k = opts.k;
  spec.per_retriever_k = opts.per_retriever_k;
  spec.list_length = opts.list_length;
  spec.teacher_hidden = opts.teacher_hidden;
  spec.teacher_scale = opts.teacher_scale;
  spec.primary = retriever_kind_from_string(opts.primary);
  spec.threads = resolve_threads(opts.threads);

  spec.mse_student.hidden = opts.student_hidden;
  spec.mse_student.init_scale = opts.init_scale;
  spec.mse_student.train.epochs = opts.mse_epochs;
  spec.mse_student.train.batch_size = opts.batch_size;
  spec.mse_student.train.peak_lr = opts.mse_lr;
  spec.mse_student.train.schedule = schedule_from_string(opts.mse_schedule);
  spec.mse_student.train.weight_decay = opts.weight_decay;

  spec.ranknet_student.hidden = opts.student_hidden;
  spec.ranknet_student.init_scale = opts.init_scale;
  spec.ranknet_student.train.epochs = opts.ranknet_epochs;
  spec.ranknet_student.train.batch_size = opts.batch_size;
  spec.ranknet_student.train.peak_lr = opts.ranknet_lr;
  spec.ranknet_student.train.schedule = schedule_from_string(opts.ranknet_schedule);
  spec.ranknet_student.train.weight_decay = opts.weight_decay;
  return spec;
}

void run_experiment(const ExperimentOpts& opts) {
  const ExperimentSpec spec = build_experiment_spec(opts);
  const ExperimentResult result = run_distillation_experiment(spec, opts.out_dir);
  std::cout << render_experiment_table(result);
  if (!opts.out_dir.empty()) {
    std::cout << "experiment: artifacts -> " << opts.out_dir.string() << '\n';
  }
}

// ------------------------------------------------------ bench-throughput ----

struct BenchOpts {
  fs::path corpus;
  fs::path queries;
  fs::path run;
  fs::path checkpoint;
  fs::path embeddings;
  fs::path expansion;
  fs::path out;
  std::size_t k = 10;
  std::size_t limit = 0;
  std::vector<std::string> reference;
};

std::vector<std::pair<std::string, double>> parse_reference_rows(
    const std::vector<std::string>& rows) {
  // Published throughput rows for context: a 13B cross-encoder teacher and
  // its two distilled students, measured on CPU in the source study.
  if (rows.empty()) {
    return {{"published-teacher", 0.15},
            {"published-student-large", 5.0},
            {"published-student-base", 8.4}};
  }
  std::vector<std::pair<std::string, double>> parsed;
  for (const auto& row : rows) {
    const auto eq = row.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--reference", "expected name=qps, got '" + row + "'");
    }
    const std::string name = row.substr(0, eq);
    const std::string value = row.substr(eq + 1);
    double qps = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), qps);
    if (ec != std::errc{} || ptr != value.data() + value.size() || qps <= 0.0) {
      throw CLI::ValidationError("--reference", "bad qps in '" + row + "'");
    }
    parsed.emplace_back(name, qps);
  }
  return parsed;
}

void run_bench(const BenchOpts& opts) {
  const auto reference = parse_reference_rows(opts.reference);
  const std::vector<RankedList> run = load_run(opts.run);
  if (run.empty()) throw IntegrityError("input run is empty");
  const std::vector<Query> queries = load_queries(opts.queries);
  const auto by_id = query_map(queries);
  const LoadedStack loaded = load_stack(opts.corpus, {}, opts.embeddings, opts.expansion);
  const MlpScorer model = MlpScorer::load(opts.checkpoint);
  const MlpPairScorer scorer(model, loaded.stack->extractor(), loaded.stack->signals());

  const std::size_t count =
      opts.limit == 0 ? run.size() : std::min<std::size_t>(opts.limit, run.size());
  ThroughputReport report =
      measure_throughput(model.tag, count, [&](std::size_t i) {
        const Query& query = require_query(by_id, run[i].query_id);
        const RankedList reranked =
            rerank(scorer, RerankRequest{query, run[i], opts.k}, *loaded.corpus);
        if (reranked.entries.empty()) throw IntegrityError("rerank produced an empty list");
      });
  report.reference = reference;

  std::cout << "bench-throughput: model=" << report.model_tag << " queries="
            << report.queries_processed << " wall=" << format_double(report.wall_seconds)
            << "s qps=" << format_double(report.qps) << '\n';
  for (const auto& [name, qps] : report.reference) {
    std::cout << "reference: " << name << " qps=" << format_double(qps) << '\n';
  }
  if (!opts.out.empty()) {
    json root;
    root["model"] = report.model_tag;
    root["queries"] = report.queries_processed;
    root["wall_seconds"] = report.wall_seconds;
    root["qps"] = report.qps;
    json refs = json::object();
    for (const auto& [name, qps] : report.reference) refs[name] = qps;
    root["reference"] = std::move(refs);
    if (opts.out.has_parent_path()) fs::create_directories(opts.out.parent_path());
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) throw ParseError("cannot write " + opts.out.string());
    out << root.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranklab: two-stage text ranking - retrieval, distillation, reranking, evaluation"};
  app.require_subcommand(1);

  auto add_config = [](CLI::App* cmd) {
    cmd->set_config("--config", "", "Read option defaults from an INI file (flags override)");
  };

  auto index_opts = std::make_shared<IndexOpts>();
  CLI::App* index = app.add_subcommand("index", "Build a BM25 inverted index from a corpus");
  index->add_option("--corpus", index_opts->corpus, "Corpus JSONL (_id, title, text)")
      ->required();
  index->add_option("--out", index_opts->out, "Output index JSON")->required();
  add_config(index);
  index->callback([index_opts] { run_index(*index_opts); });

  auto retrieve_opts = std::make_shared<RetrieveOpts>();
  CLI::App* retrieve = app.add_subcommand("retrieve", "Rank the corpus for each query (stage 1)");
  retrieve->add_option("--corpus", retrieve_opts->corpus, "Corpus JSONL")->required();
  retrieve->add_option("--queries", retrieve_opts->queries, "Queries JSONL (_id, text)")
      ->required();
  retrieve->add_option("--retriever", retrieve_opts->retriever, "First-stage model")
      ->check(CLI::IsMember({"bm25", "dense", "sparse"}))
      ->capture_default_str();
  retrieve->add_option("--index", retrieve_opts->index, "Prebuilt BM25 index JSON (optional)");
  retrieve->add_option("--embeddings", retrieve_opts->embeddings,
                       "Embeddings JSONL (needed for dense)");
  retrieve->add_option("--expansion", retrieve_opts->expansion,
                       "Sparse expansion JSONL (needed for sparse)");
  retrieve->add_option("--k0", retrieve_opts->k0, "Candidate depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  retrieve->add_option("--query-cap", retrieve_opts->query_cap, "Keep first N queries (0 = all)")
      ->capture_default_str();
  retrieve->add_option("--threads", retrieve_opts->threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  retrieve->add_option("--out", retrieve_opts->out, "Output TREC run file")->required();
  add_config(retrieve);
  retrieve->callback([retrieve_opts] { run_retrieve(*retrieve_opts); });

  auto mine_opts = std::make_shared<MineOpts>();
  CLI::App* mine =
      app.add_subcommand("mine", "Mine candidate pools from the bm25/dense/sparse trio");
  mine->add_option("--corpus", mine_opts->corpus, "Corpus JSONL")->required();
  mine->add_option("--queries", mine_opts->queries, "Queries JSONL")->required();
  mine->add_option("--embeddings", mine_opts->embeddings, "Embeddings JSONL")->required();
  mine->add_option("--expansion", mine_opts->expansion, "Sparse expansion JSONL")->required();
  mine->add_option("--per-retriever-k", mine_opts->per_retriever_k, "Top-k per retriever")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mine->add_option("--query-cap", mine_opts->query_cap, "Keep first N queries (0 = all)")
      ->capture_default_str();
  mine->add_option("--threads", mine_opts->threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  mine->add_option("--out", mine_opts->out, "Output pools JSONL")->required();
  add_config(mine);
  mine->callback([mine_opts] { run_mine(*mine_opts); });

  auto teacher_opts = std::make_shared<TeacherScoreOpts>();
  CLI::App* teacher =
      app.add_subcommand("teacher-score", "Score mined pools with a teacher checkpoint");
  teacher->add_option("--corpus", teacher_opts->corpus, "Corpus JSONL")->required();
  teacher->add_option("--queries", teacher_opts->queries, "Queries JSONL")->required();
  teacher->add_option("--pools", teacher_opts->pools, "Candidate pools JSONL")->required();
  teacher->add_option("--checkpoint", teacher_opts->checkpoint, "Teacher checkpoint JSON")
      ->required();
  teacher->add_option("--embeddings", teacher_opts->embeddings, "Embeddings JSONL");
  teacher->add_option("--expansion", teacher_opts->expansion, "Sparse expansion JSONL");
  teacher->add_option("--out", teacher_opts->out, "Output scores TSV")->required();
  teacher->add_option("--samples-mse-out", teacher_opts->samples_mse_out,
                      "Also write regression samples JSONL");
  teacher->add_option("--samples-ranknet-out", teacher_opts->samples_ranknet_out,
                      "Also write permutation samples JSONL");
  teacher->add_option("--samples-bce-out", teacher_opts->samples_bce_out,
                      "Also write binary samples JSONL (needs --qrels)");
  teacher->add_option("--qrels", teacher_opts->qrels, "Qrels TSV for bce positives");
  teacher->add_option("--list-length", teacher_opts->list_length, "Permutation list length")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  teacher->add_option("--negatives-per-positive", teacher_opts->negatives_per_positive,
                      "Negative sampling ratio for bce")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  teacher->add_option("--seed", teacher_opts->seed, "Seed for bce negative sampling")
      ->capture_default_str();
  add_config(teacher);
  teacher->callback([teacher_opts] { run_teacher_score(*teacher_opts); });

  auto train_opts = std::make_shared<TrainOpts>();
  CLI::App* train_cmd = app.add_subcommand("train", "Train an MLP reranker on teacher samples");
  train_cmd->add_option("--samples", train_opts->samples, "Training samples JSONL")->required();
  train_cmd->add_option("--loss", train_opts->loss, "Loss the samples must carry")
      ->check(CLI::IsMember({"bce", "mse", "ranknet"}))
      ->required();
  train_cmd->add_option("--corpus", train_opts->corpus, "Corpus JSONL")->required();
  train_cmd->add_option("--queries", train_opts->queries, "Queries JSONL")->required();
  train_cmd->add_option("--pools", train_opts->pools, "Candidate pools JSONL")->required();
  train_cmd->add_option("--embeddings", train_opts->embeddings, "Embeddings JSONL");
  train_cmd->add_option("--expansion", train_opts->expansion, "Sparse expansion JSONL");
  train_cmd->add_option("--epochs", train_opts->epochs, "Training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--batch-size", train_opts->batch_size, "Samples per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--lr", train_opts->lr, "Peak learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--schedule", train_opts->schedule, "Learning-rate schedule")
      ->check(CLI::IsMember({"linear_decay", "constant"}))
      ->capture_default_str();
  train_cmd->add_option("--weight-decay", train_opts->weight_decay, "AdamW weight decay")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train_cmd->add_option("--hidden", train_opts->hidden, "Hidden layer width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--init-scale", train_opts->init_scale, "Weight init scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--tag", train_opts->tag, "Model tag stored in the checkpoint")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_opts->seed, "Seed for init and shuffling")
      ->capture_default_str();
  train_cmd->add_option("--out", train_opts->out, "Output checkpoint JSON")->required();
  train_cmd->add_option("--loss-log", train_opts->loss_log, "Optional loss log CSV");
  add_config(train_cmd);
  train_cmd->callback([train_opts] { run_train(*train_opts); });

  auto rerank_opts = std::make_shared<RerankOpts>();
  CLI::App* rerank_cmd = app.add_subcommand("rerank", "Rescore a stage-1 run (stage 2)");
  rerank_cmd->add_option("--corpus", rerank_opts->corpus, "Corpus JSONL")->required();
  rerank_cmd->add_option("--queries", rerank_opts->queries, "Queries JSONL")->required();
  rerank_cmd->add_option("--run", rerank_opts->run, "Stage-1 TREC run file")->required();
  rerank_cmd->add_option("--checkpoint", rerank_opts->checkpoint, "Reranker checkpoint JSON");
  rerank_cmd->add_flag("--passthrough", rerank_opts->passthrough,
                       "Keep stage-1 scores (identity reranker)");
  rerank_cmd->add_flag("--oracle", rerank_opts->oracle, "Score by qrels grade (needs --qrels)");
  rerank_cmd->add_flag("--oracle-negated", rerank_opts->oracle_negated,
                       "Score by negated qrels grade (needs --qrels)");
  rerank_cmd->add_option("--qrels", rerank_opts->qrels, "Qrels TSV for the oracle modes");
  rerank_cmd->add_option("--embeddings", rerank_opts->embeddings, "Embeddings JSONL");
  rerank_cmd->add_option("--expansion", rerank_opts->expansion, "Sparse expansion JSONL");
  rerank_cmd->add_option("--k", rerank_opts->k, "Output depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rerank_cmd->add_option("--threads", rerank_opts->threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  rerank_cmd->add_option("--out", rerank_opts->out, "Output TREC run file")->required();
  add_config(rerank_cmd);
  rerank_cmd->callback([rerank_opts] {
    const int modes = static_cast<int>(!rerank_opts->checkpoint.empty()) +
                      static_cast<int>(rerank_opts->passthrough) +
                      static_cast<int>(rerank_opts->oracle) +
                      static_cast<int>(rerank_opts->oracle_negated);
    if (modes != 1) {
      throw CLI::ValidationError(
          "rerank", "pick exactly one of --checkpoint, --passthrough, --oracle, --oracle-negated");
    }
    if ((rerank_opts->oracle || rerank_opts->oracle_negated) && rerank_opts->qrels.empty()) {
      throw CLI::ValidationError("rerank", "the oracle modes need --qrels");
    }
    run_rerank(*rerank_opts);
  });

  auto eval_opts = std::make_shared<EvalOpts>();
  CLI::App* eval_cmd = app.add_subcommand("eval", "NDCG@k for a run against qrels");
  eval_cmd->add_option("--run", eval_opts->run, "TREC run file")->required();
  eval_cmd->add_option("--queries", eval_opts->queries, "Queries JSONL")->required();
  eval_cmd->add_option("--qrels", eval_opts->qrels, "Qrels TSV")->required();
  eval_cmd->add_option("--k", eval_opts->k, "Rank cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--gain", eval_opts->gain, "Gain function")
      ->check(CLI::IsMember({"linear", "exponential"}))
      ->capture_default_str();
  eval_cmd->add_option("--name", eval_opts->name, "Dataset label in the report")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_opts->out, "Optional report JSON");
  add_config(eval_cmd);
  eval_cmd->callback([eval_opts] { run_eval(*eval_opts); });

  auto report_opts = std::make_shared<ReportOpts>();
  CLI::App* report_cmd =
      app.add_subcommand("report", "Aggregate per-dataset scores into a benchmark report");
  report_cmd
      ->add_option("--scores", report_opts->scores,
                   "JSON with baseline tag, dataset groups and per-model scores")
      ->required();
  report_cmd->add_option("--out-dir", report_opts->out_dir, "Report output directory")
      ->required();
  add_config(report_cmd);
  report_cmd->callback([report_opts] { run_report(*report_opts); });

  auto experiment_opts = std::make_shared<ExperimentOpts>();
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run the synthetic distillation study end to end");
  experiment->add_option("--out-dir", experiment_opts->out_dir,
                         "Artifact directory (omit to skip writing)");
  experiment->add_option("--seed", experiment_opts->seed, "Master seed")->capture_default_str();
  experiment->add_option("--docs", experiment_opts->docs, "Synthetic corpus size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--train-queries", experiment_opts->train_queries, "Training queries")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--eval-queries", experiment_opts->eval_queries, "Held-out queries")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--vocab", experiment_opts->vocab, "Vocabulary size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--topics", experiment_opts->topics, "Topic count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--dim", experiment_opts->dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--k0", experiment_opts->k0, "Candidate depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--k", experiment_opts->k, "Rerank depth / NDCG cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment
      ->add_option("--per-retriever-k", experiment_opts->per_retriever_k,
                   "Mining depth per retriever")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--list-length", experiment_opts->list_length, "RankNet list length")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  experiment->add_option("--teacher-hidden", experiment_opts->teacher_hidden,
                         "Teacher hidden width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--teacher-scale", experiment_opts->teacher_scale,
                         "Teacher weight scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--student-hidden", experiment_opts->student_hidden,
                         "Student hidden width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--init-scale", experiment_opts->init_scale, "Student init scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--mse-lr", experiment_opts->mse_lr, "MSE student peak lr")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--mse-epochs", experiment_opts->mse_epochs, "MSE student epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--mse-schedule", experiment_opts->mse_schedule, "MSE student schedule")
      ->check(CLI::IsMember({"linear_decay", "constant"}))
      ->capture_default_str();
  experiment->add_option("--ranknet-lr", experiment_opts->ranknet_lr, "RankNet student peak lr")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment
      ->add_option("--ranknet-epochs", experiment_opts->ranknet_epochs, "RankNet student epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment
      ->add_option("--ranknet-schedule", experiment_opts->ranknet_schedule,
                   "RankNet student schedule")
      ->check(CLI::IsMember({"linear_decay", "constant"}))
      ->capture_default_str();
  experiment->add_option("--batch-size", experiment_opts->batch_size, "Batch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--weight-decay", experiment_opts->weight_decay, "AdamW weight decay")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  experiment->add_option("--primary", experiment_opts->primary, "Baseline retriever")
      ->check(CLI::IsMember({"bm25", "dense", "sparse"}))
      ->capture_default_str();
  experiment->add_option("--threads", experiment_opts->threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  add_config(experiment);
  experiment->callback([experiment_opts] { run_experiment(*experiment_opts); });

  auto bench_opts = std::make_shared<BenchOpts>();
  CLI::App* bench =
      app.add_subcommand("bench-throughput", "Measure reranking queries per second");
  bench->add_option("--corpus", bench_opts->corpus, "Corpus JSONL")->required();
  bench->add_option("--queries", bench_opts->queries, "Queries JSONL")->required();
  bench->add_option("--run", bench_opts->run, "Stage-1 TREC run file")->required();
  bench->add_option("--checkpoint", bench_opts->checkpoint, "Reranker checkpoint JSON")
      ->required();
  bench->add_option("--embeddings", bench_opts->embeddings, "Embeddings JSONL");
  bench->add_option("--expansion", bench_opts->expansion, "Sparse expansion JSONL");
  bench->add_option("--k", bench_opts->k, "Rerank depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--limit", bench_opts->limit, "Rerank at most N queries (0 = all)")
      ->capture_default_str();
  bench->add_option("--reference", bench_opts->reference,
                    "Comparison rows as name=qps (defaults to the published teacher/student rows)");
  bench->add_option("--out", bench_opts->out, "Optional report JSON");
  add_config(bench);
  bench->callback([bench_opts] { run_bench(*bench_opts); });

  if (argc > 0) app.name(fs::path(argv[0]).filename().string());
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    args = expand_config_tokens(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ranklab::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ranklab::IntegrityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
