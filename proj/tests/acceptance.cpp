// Acceptance harness: checks the eight release criteria and prints one
// PASS/FAIL line per criterion. Usage: ranklab_acceptance <path-to-cli>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ranklab/distill.hpp"
#include "ranklab/eval.hpp"
#include "ranklab/losses.hpp"
#include "ranklab/pipeline.hpp"
#include "ranklab/retrieval.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/run_file.hpp"
#include "ranklab/scorer.hpp"
#include "ranklab/synthetic.hpp"
#include "ranklab/train.hpp"

namespace fs = std::filesystem;
using namespace ranklab;
using nlohmann::json;

namespace {

std::string g_cli;
fs::path g_work;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string command = g_cli + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed for: " + command);
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void require_cli(const std::string& args, const std::string& context) {
  const CliResult result = run_cli(args);
  if (result.exit_code != 0) {
    throw std::runtime_error(context + ": cli exited " + std::to_string(result.exit_code) +
                             "\n  command: " + args + "\n  output: " + result.output);
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) { return read_file(a) == read_file(b); }

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  json root;
  in >> root;
  return root;
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int g_passed = 0, g_failed = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail,
            double seconds) {
  std::ostringstream line;
  line << "[" << number << "/8] " << (ok ? "PASS" : "FAIL") << " " << name << ": " << detail
       << " [" << std::fixed << std::setprecision(1) << seconds << "s]";
  std::cout << line.str() << std::endl;
  (ok ? g_passed : g_failed)++;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    std::tie(ok, detail) = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(number, name, ok, detail, elapsed_seconds(start));
}

std::string fmt(double v) { return format_double(v); }

// ------------------------------------------------------------------------
// 1. Gradient correctness: losses and MLP backward vs central differences.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_gradients() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  const double h = 1e-5;
  double worst = 0.0;
  auto track = [&](double grad, double fd) {
    const double rel = std::abs(grad - fd) / std::max(1.0, std::abs(grad));
    worst = std::max(worst, rel);
  };

  for (int instance = 0; instance < 100; ++instance) {
    // losses: gradient with respect to the raw score(s)
    const double s = rng.uniform(-4.0, 4.0);
    const int label = rng.uniform() < 0.5 ? 0 : 1;
    track(bce_loss_grad(s, label).grad,
          (bce_loss_grad(s + h, label).loss - bce_loss_grad(s - h, label).loss) / (2 * h));

    const double t = rng.uniform(-3.0, 3.0);
    track(mse_loss_grad(s, t).grad,
          (mse_loss_grad(s + h, t).loss - mse_loss_grad(s - h, t).loss) / (2 * h));

    const int m = 2 + static_cast<int>(rng.uniform_int(0, 6));
    Vector scores(m);
    for (int i = 0; i < m; ++i) scores[i] = rng.uniform(-2.0, 2.0);
    const Vector list_grad = ranknet_loss_grad(scores).grad;
    for (int i = 0; i < m; ++i) {
      Vector up = scores, down = scores;
      up[i] += h;
      down[i] -= h;
      track(list_grad[i],
            (ranknet_loss_grad(up).loss - ranknet_loss_grad(down).loss) / (2 * h));
    }

    // MLP backward over the full parameter vector
    MlpScorer model = MlpScorer::random_init(8, 16, rng, 1.0);
    const int cols = 1 + static_cast<int>(rng.uniform_int(0, 2));
    Matrix features(8, cols);
    Vector upstream(cols);
    for (int c = 0; c < cols; ++c) {
      upstream[c] = rng.uniform(-2.0, 2.0);
      for (int r = 0; r < 8; ++r) features(r, c) = rng.normal();
    }
    const Vector grad = model.backward(features, upstream);
    Vector& theta = model.parameters();
    // probing every 7th parameter keeps 100 instances well under budget
    for (Eigen::Index p = instance % 7; p < theta.size(); p += 7) {
      const double saved = theta[p];
      auto value = [&] {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) sum += upstream[c] * model.forward(features.col(c));
        return sum;
      };
      theta[p] = saved + h;
      const double up = value();
      theta[p] = saved - h;
      const double down = value();
      theta[p] = saved;
      track(grad[p], (up - down) / (2 * h));
    }
  }

  const double seconds = elapsed_seconds(start);
  const bool ok = worst < 1e-4 && seconds < 10.0;
  return {ok, "max relative error " + fmt(worst) + " over 100 instances per check, " +
                  fmt(seconds) + "s (budget 10s)"};
}

// ------------------------------------------------------------------------
// 2. NDCG vs an exhaustive-permutation normalization oracle, m <= 6.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_ndcg_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(7);
  double worst = 0.0;
  std::size_t positives_seen = 0;

  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 5));
    std::vector<std::string> docs;
    Qrels::DocGrades grades;
    std::vector<int> grade_values(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      docs.push_back("d" + std::to_string(i));
      grade_values[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_int(0, 4));
      grades[docs.back()] = grade_values[static_cast<std::size_t>(i)];
    }
    std::vector<std::string> ranking = docs;
    rng.shuffle(ranking);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, m - 1));

    // brute force: max DCG@k over every permutation of the judged grades
    std::vector<int> perm = grade_values;
    std::sort(perm.begin(), perm.end());
    double best = 0.0;
    do {
      double dcg = 0.0;
      for (std::size_t r = 0; r < std::min<std::size_t>(k, perm.size()); ++r) {
        dcg += static_cast<double>(perm[r]) / std::log2(static_cast<double>(r) + 2.0);
      }
      best = std::max(best, dcg);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double got = ndcg_at_k(ranking, grades, k);
    if (best == 0.0) {
      worst = std::max(worst, std::abs(got));
    } else {
      ++positives_seen;
      const double expected = dcg_at_k(ranking, grades, k) / best;
      worst = std::max(worst, std::abs(got - expected));
    }
  }

  const double seconds = elapsed_seconds(start);
  const bool ok = worst <= 1e-12 && seconds < 60.0;
  return {ok, "max |ndcg - oracle| " + fmt(worst) + " over 10000 assignments (" +
                  std::to_string(positives_seen) + " with positives), " + fmt(seconds) +
                  "s (budget 60s)"};
}

// ------------------------------------------------------------------------
// 3. Hand-computed fixtures.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_fixtures() {
  const Qrels::DocGrades grades = {{"a", 1}, {"b", 0}, {"c", 2}};
  const std::vector<std::string> ranking = {"a", "b", "c"};
  const double dcg = dcg_at_k(ranking, grades, 3);
  const bool dcg_ok = std::abs(dcg - 2.0) <= 1e-12;

  // 2 / (2 + 1/log2(3)) = 0.7601875334318685
  const double ndcg = ndcg_at_k(ranking, grades, 3);
  const double ndcg_expected = 2.0 / (2.0 + 1.0 / std::log2(3.0));
  const bool ndcg_ok = std::abs(ndcg - ndcg_expected) <= 1e-5;

  const double ranknet = ranknet_loss_grad(Vector::Constant(3, 0.42)).loss;
  const bool ranknet_ok = std::abs(ranknet - 3.0 * std::log(2.0)) <= 1e-9;

  const double bce = bce_loss_grad(0.0, 1).loss;
  const bool bce_ok = std::abs(bce - std::log(2.0)) <= 1e-12;

  const bool ok = dcg_ok && ndcg_ok && ranknet_ok && bce_ok;
  return {ok, "DCG[1,0,2]=" + fmt(dcg) + ", NDCG=" + fmt(ndcg) + " (expected " +
                  fmt(ndcg_expected) + "), RankNet ties L=3 -> " + fmt(ranknet) +
                  ", BCE(0,1)=" + fmt(bce)};
}

// ------------------------------------------------------------------------
// 4. Mining bound fixtures: 16 / 48 / 38 candidates.
// ------------------------------------------------------------------------

class ListRetriever : public Retriever {
 public:
  ListRetriever(std::string tag, std::vector<std::string> docs)
      : tag_(std::move(tag)), docs_(std::move(docs)) {}
  const std::string& tag() const override { return tag_; }
  RankedList topk(const Query& query, std::size_t k0) const override {
    RankedList list{query.query_id, {}, tag_};
    double score = static_cast<double>(docs_.size());
    for (const auto& id : docs_) list.entries.push_back({id, score--});
    if (list.entries.size() > k0) list.entries.resize(k0);
    return list;
  }
  double pair_score(const Query&, const std::string&) const override { return 0.0; }

 private:
  std::string tag_;
  std::vector<std::string> docs_;
};

std::pair<bool, std::string> criterion_mining() {
  auto ids = [](const std::string& prefix, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  };
  auto cat = [](std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  };
  auto pool_size = [](const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const std::vector<std::string>& c) {
    const ListRetriever ra("r-a", a), rb("r-b", b), rc("r-c", c);
    const std::vector<const Retriever*> retrievers = {&ra, &rb, &rc};
    return mine_candidates(Query{"q", "x"}, retrievers, 16).candidates.size();
  };

  const auto shared = ids("s", 16);
  const std::size_t overlap = pool_size(shared, shared, shared);

  const std::size_t disjoint = pool_size(ids("a", 16), ids("b", 16), ids("c", 16));

  // 2 in all three, 4 extra shared by A/B, 2 extra shared by A/C,
  // unique tails 8/10/12: union = 2+4+2+8+10+12 = 38
  const auto triple = ids("t", 2), ab = ids("ab", 4), ac = ids("ac", 2);
  const std::size_t partial = pool_size(cat({triple, ab, ac, ids("au", 8)}),
                                        cat({triple, ab, ids("bu", 10)}),
                                        cat({triple, ac, ids("cu", 12)}));

  const bool ok = overlap == 16 && disjoint == 48 && partial == 38;
  return {ok, "pool sizes " + std::to_string(overlap) + "/" + std::to_string(disjoint) + "/" +
                  std::to_string(partial) + " (expected 16/48/38)"};
}

// ------------------------------------------------------------------------
// Shared CLI fixture: a small synthetic collection on disk.
// ------------------------------------------------------------------------

struct SmallWorld {
  fs::path dir;
  fs::path corpus, queries, embeddings, expansion, qrels, stage1;
};

SmallWorld make_small_world() {
  SmallWorld world;
  world.dir = g_work / "world";
  fs::create_directories(world.dir);
  SyntheticSpec spec;
  spec.doc_count = 200;
  spec.train_query_count = 5;
  spec.eval_query_count = 15;
  spec.vocab_size = 100;
  spec.topic_count = 10;
  spec.embedding_dim = 8;
  spec.seed = 11;
  SyntheticData data = generate_synthetic(spec);
  world.corpus = world.dir / "corpus.jsonl";
  world.queries = world.dir / "queries.jsonl";
  world.embeddings = world.dir / "embeddings.jsonl";
  world.expansion = world.dir / "expansion.jsonl";
  save_corpus(data.corpus, world.corpus);
  save_queries(data.eval_queries, world.queries);
  data.embeddings.save(world.embeddings);
  data.expansion.save(world.expansion);

  // stage-1 run, then qrels granting 2,1,1 to each query's top three docs,
  // so every positive lies inside the candidate window
  world.stage1 = world.dir / "stage1.trec";
  require_cli("retrieve --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --retriever bm25 --k0 12 --threads 1 --out " +
                  world.stage1.string(),
              "fixture retrieve");
  Qrels qrels;
  for (const auto& list : load_run(world.stage1)) {
    for (std::size_t r = 0; r < std::min<std::size_t>(3, list.entries.size()); ++r) {
      qrels.add(list.query_id, list.entries[r].doc_id, r == 0 ? 2 : 1);
    }
  }
  world.qrels = world.dir / "qrels.tsv";
  save_qrels(qrels, world.qrels);
  return world;
}

// ------------------------------------------------------------------------
// 5. Pipeline invariants: passthrough bytes, oracle ceiling, subset rule.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_pipeline(const SmallWorld& world) {
  const fs::path pass = world.dir / "passthrough.trec";
  require_cli("rerank --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --run " + world.stage1.string() +
                  " --passthrough --k 12 --threads 1 --out " + pass.string(),
              "passthrough rerank");
  const bool passthrough_ok = same_bytes(world.stage1, pass);

  const fs::path oracle = world.dir / "oracle.trec";
  require_cli("rerank --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --run " + world.stage1.string() +
                  " --oracle --qrels " + world.qrels.string() + " --k 12 --threads 1 --out " +
                  oracle.string(),
              "oracle rerank");
  Dataset dataset;
  dataset.name = "world";
  dataset.group = "world";
  dataset.queries = load_queries(world.queries);
  dataset.qrels = load_qrels(world.qrels);
  const RunEvaluation eval = evaluate_run(load_run(oracle), dataset, 10);
  const bool oracle_ok = std::abs(eval.mean_ndcg - 1.0) <= 1e-12 && eval.evaluated == 15;

  // rerank output must stay inside the stage-1 candidate set
  const fs::path subset = world.dir / "subset.trec";
  require_cli("rerank --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --run " + world.stage1.string() +
                  " --oracle-negated --qrels " + world.qrels.string() +
                  " --k 5 --threads 1 --out " + subset.string(),
              "negated rerank");
  std::map<std::string, std::set<std::string>> stage1_docs;
  for (const auto& list : load_run(world.stage1)) {
    for (const auto& e : list.entries) stage1_docs[list.query_id].insert(e.doc_id);
  }
  bool subset_ok = true;
  for (const auto& list : load_run(subset)) {
    subset_ok = subset_ok && list.entries.size() <= 5;
    for (const auto& e : list.entries) {
      subset_ok = subset_ok && stage1_docs[list.query_id].count(e.doc_id) == 1;
    }
  }

  const bool ok = passthrough_ok && oracle_ok && subset_ok;
  return {ok, std::string("passthrough bytes ") + (passthrough_ok ? "identical" : "DIFFER") +
                  ", oracle NDCG@10 " + fmt(eval.mean_ndcg) + ", subset rule " +
                  (subset_ok ? "holds" : "VIOLATED")};
}

// ------------------------------------------------------------------------
// 6. Desk-scale distillation study over ten seeds.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_study() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kTauThreshold = 0.6;  // frozen from pilot runs (min 0.637 over seeds 0..9)
  int beat_baseline = 0, ranknet_wins = 0, tau_ok = 0;
  std::cout << "      seed  baseline       mse   ranknet   teacher   rn-tau" << std::endl;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentSpec spec;  // default desk-scale study
    spec.seed = seed;
    const ExperimentResult r = run_distillation_experiment(spec, {});
    if (r.mse_ndcg > r.baseline_ndcg && r.ranknet_ndcg > r.baseline_ndcg) ++beat_baseline;
    if (r.ranknet_ndcg >= r.mse_ndcg) ++ranknet_wins;
    if (r.ranknet_tau > kTauThreshold) ++tau_ok;
    std::ostringstream row;
    row << "      " << std::setw(4) << seed << std::fixed << std::setprecision(4) << std::setw(10)
        << r.baseline_ndcg << std::setw(10) << r.mse_ndcg << std::setw(10) << r.ranknet_ndcg
        << std::setw(10) << r.teacher_ndcg << std::setw(9) << r.ranknet_tau;
    std::cout << row.str() << std::endl;
  }
  const double seconds = elapsed_seconds(start);
  const bool ok = beat_baseline == 10 && ranknet_wins >= 8 && tau_ok == 10 && seconds < 900.0;
  std::ostringstream detail;
  detail << "students>baseline " << beat_baseline << "/10, ranknet>=mse " << ranknet_wins
         << "/10 (need 8), tau>" << kTauThreshold << " " << tau_ok << "/10, " << fmt(seconds)
         << "s (budget 900s)";
  return {ok, detail.str()};
}

// ------------------------------------------------------------------------
// 7. Determinism: byte-identical artifacts on rerun and across threads.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_determinism(const SmallWorld& world) {
  const fs::path dir = g_work / "determinism";
  fs::create_directories(dir);
  std::vector<std::string> failures;
  auto expect_same = [&](const fs::path& a, const fs::path& b, const std::string& what) {
    if (!same_bytes(a, b)) failures.push_back(what);
  };

  const std::string base_inputs = " --corpus " + world.corpus.string() + " --queries " +
                                  world.queries.string() + " --embeddings " +
                                  world.embeddings.string() + " --expansion " +
                                  world.expansion.string();

  // index: plain rerun
  require_cli("index --corpus " + world.corpus.string() + " --out " + (dir / "idx-a.json").string(),
              "index a");
  require_cli("index --corpus " + world.corpus.string() + " --out " + (dir / "idx-b.json").string(),
              "index b");
  expect_same(dir / "idx-a.json", dir / "idx-b.json", "index rerun");

  // retrieve: rerun and 1 vs 8 threads
  for (const auto& [name, threads] : std::vector<std::pair<std::string, std::string>>{
           {"ret-a", "1"}, {"ret-b", "1"}, {"ret-c", "8"}}) {
    require_cli("retrieve" + base_inputs + " --retriever dense --k0 10 --threads " + threads +
                    " --out " + (dir / (name + ".trec")).string(),
                "retrieve " + name);
  }
  expect_same(dir / "ret-a.trec", dir / "ret-b.trec", "retrieve rerun");
  expect_same(dir / "ret-a.trec", dir / "ret-c.trec", "retrieve threads 1 vs 8");

  // mine: rerun and 1 vs 8 threads
  for (const auto& [name, threads] : std::vector<std::pair<std::string, std::string>>{
           {"pools-a", "1"}, {"pools-b", "1"}, {"pools-c", "8"}}) {
    require_cli("mine" + base_inputs + " --per-retriever-k 8 --threads " + threads + " --out " +
                    (dir / (name + ".jsonl")).string(),
                "mine " + name);
  }
  expect_same(dir / "pools-a.jsonl", dir / "pools-b.jsonl", "mine rerun");
  expect_same(dir / "pools-a.jsonl", dir / "pools-c.jsonl", "mine threads 1 vs 8");

  // teacher-score with derived sample files: rerun
  Rng teacher_rng(5);
  MlpScorer teacher = MlpScorer::random_init(8, 16, teacher_rng, 1.0);
  teacher.tag = "teacher-fixture";
  teacher.save(dir / "teacher.json");
  for (const auto* name : {"a", "b"}) {
    require_cli("teacher-score" + base_inputs + " --pools " + (dir / "pools-a.jsonl").string() +
                    " --checkpoint " + (dir / "teacher.json").string() + " --qrels " +
                    world.qrels.string() + " --seed 3 --out " +
                    (dir / (std::string("scores-") + name + ".tsv")).string() +
                    " --samples-mse-out " +
                    (dir / (std::string("mse-") + name + ".jsonl")).string() +
                    " --samples-ranknet-out " +
                    (dir / (std::string("rank-") + name + ".jsonl")).string() +
                    " --samples-bce-out " +
                    (dir / (std::string("bce-") + name + ".jsonl")).string(),
                std::string("teacher-score ") + name);
  }
  expect_same(dir / "scores-a.tsv", dir / "scores-b.tsv", "teacher-score rerun");
  expect_same(dir / "mse-a.jsonl", dir / "mse-b.jsonl", "mse samples rerun");
  expect_same(dir / "rank-a.jsonl", dir / "rank-b.jsonl", "ranknet samples rerun");
  expect_same(dir / "bce-a.jsonl", dir / "bce-b.jsonl", "bce samples rerun");

  // train: rerun must give identical checkpoints and loss logs
  for (const auto* name : {"a", "b"}) {
    require_cli("train --samples " + (dir / "mse-a.jsonl").string() + " --loss mse" +
                    base_inputs + " --pools " + (dir / "pools-a.jsonl").string() +
                    " --epochs 3 --batch-size 16 --lr 0.003 --seed 9 --tag student" +
                    " --out " + (dir / (std::string("ckpt-") + name + ".json")).string() +
                    " --loss-log " + (dir / (std::string("loss-") + name + ".csv")).string(),
                std::string("train ") + name);
  }
  expect_same(dir / "ckpt-a.json", dir / "ckpt-b.json", "train rerun checkpoint");
  expect_same(dir / "loss-a.csv", dir / "loss-b.csv", "train rerun loss log");

  // rerank with the trained checkpoint: rerun and 1 vs 8 threads
  for (const auto& [name, threads] : std::vector<std::pair<std::string, std::string>>{
           {"rr-a", "1"}, {"rr-b", "1"}, {"rr-c", "8"}}) {
    require_cli("rerank" + base_inputs + " --run " + world.stage1.string() + " --checkpoint " +
                    (dir / "ckpt-a.json").string() + " --k 5 --threads " + threads + " --out " +
                    (dir / (name + ".trec")).string(),
                "rerank " + name);
  }
  expect_same(dir / "rr-a.trec", dir / "rr-b.trec", "rerank rerun");
  expect_same(dir / "rr-a.trec", dir / "rr-c.trec", "rerank threads 1 vs 8");

  // eval: rerun
  for (const auto* name : {"a", "b"}) {
    require_cli("eval --run " + (dir / "rr-a.trec").string() + " --queries " +
                    world.queries.string() + " --qrels " + world.qrels.string() +
                    " --k 5 --out " + (dir / (std::string("eval-") + name + ".json")).string(),
                std::string("eval ") + name);
  }
  expect_same(dir / "eval-a.json", dir / "eval-b.json", "eval rerun");

  // report: rerun
  json scores;
  scores["baseline"] = "base";
  scores["groups"] = {{"ds1", "g1"}, {"ds2", "g1"}, {"ds3", "g2"}};
  scores["models"]["base"] = {{"ds1", 0.50}, {"ds2", 0.52}, {"ds3", 0.40}};
  scores["models"]["student"] = {{"ds1", 0.55}, {"ds2", 0.50}, {"ds3", 0.47}};
  std::ofstream(dir / "scores.json") << scores.dump(2) << '\n';
  for (const auto* name : {"rep-a", "rep-b"}) {
    require_cli("report --scores " + (dir / "scores.json").string() + " --out-dir " +
                    (dir / name).string(),
                std::string("report ") + name);
  }
  expect_same(dir / "rep-a" / "report.json", dir / "rep-b" / "report.json", "report rerun");
  expect_same(dir / "rep-a" / "table.txt", dir / "rep-b" / "table.txt", "report table rerun");
  expect_same(dir / "rep-a" / "chart-student.csv", dir / "rep-b" / "chart-student.csv",
              "report chart rerun");

  // experiment: full artifact directory, rerun and 1 vs 8 threads
  const std::string exp_flags =
      " --seed 4 --docs 200 --train-queries 25 --eval-queries 10 --vocab 100 --topics 10"
      " --dim 8 --k0 20 --k 5 --per-retriever-k 8 --list-length 10 --mse-epochs 2"
      " --ranknet-epochs 3";
  for (const auto& [name, threads] : std::vector<std::pair<std::string, std::string>>{
           {"exp-a", "1"}, {"exp-b", "1"}, {"exp-c", "8"}}) {
    require_cli("experiment" + exp_flags + " --threads " + threads + " --out-dir " +
                    (dir / name).string(),
                "experiment " + name);
  }
  std::size_t artifact_count = 0;
  for (const auto& entry : fs::directory_iterator(dir / "exp-a")) {
    const auto file = entry.path().filename();
    ++artifact_count;
    expect_same(entry.path(), dir / "exp-b" / file, "experiment rerun: " + file.string());
    expect_same(entry.path(), dir / "exp-c" / file, "experiment threads: " + file.string());
  }

  bool ok = failures.empty() && artifact_count >= 20;
  std::string detail;
  if (ok) {
    detail = "all artifacts byte-identical on rerun and threads 1 vs 8 (" +
             std::to_string(artifact_count) +
             " experiment files; bench-throughput excluded: wall time is measured)";
  } else {
    detail = "mismatches: ";
    for (const auto& f : failures) detail += f + "; ";
    if (artifact_count < 20) detail += "only " + std::to_string(artifact_count) + " artifacts";
  }
  return {ok, detail};
}

// ------------------------------------------------------------------------
// 8. Throughput harness: qps plus the published reference rows.
// ------------------------------------------------------------------------

std::pair<bool, std::string> criterion_throughput(const SmallWorld& world) {
  const fs::path dir = g_work / "determinism";  // reuse the trained checkpoint
  const fs::path out = g_work / "bench.json";
  require_cli("bench-throughput --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --embeddings " + world.embeddings.string() +
                  " --expansion " + world.expansion.string() + " --run " +
                  world.stage1.string() + " --checkpoint " + (dir / "ckpt-a.json").string() +
                  " --k 5 --out " + out.string(),
              "bench default");
  const json report = read_json(out);
  const bool qps_ok = report.at("qps").get<double>() > 0.0 &&
                      report.at("queries").get<std::size_t>() == 15 &&
                      report.at("wall_seconds").get<double>() > 0.0;
  const auto& refs = report.at("reference");
  const bool defaults_ok = refs.size() == 3 &&
                           refs.at("published-teacher").get<double>() == 0.15 &&
                           refs.at("published-student-large").get<double>() == 5.0 &&
                           refs.at("published-student-base").get<double>() == 8.4;

  // custom comparison rows override the defaults
  const fs::path custom = g_work / "bench-custom.json";
  require_cli("bench-throughput --corpus " + world.corpus.string() + " --queries " +
                  world.queries.string() + " --embeddings " + world.embeddings.string() +
                  " --expansion " + world.expansion.string() + " --run " +
                  world.stage1.string() + " --checkpoint " + (dir / "ckpt-a.json").string() +
                  " --k 5 --limit 4 --reference mine=2.5 --out " + custom.string(),
              "bench custom");
  const json custom_report = read_json(custom);
  const bool custom_ok = custom_report.at("reference").size() == 1 &&
                         custom_report.at("reference").at("mine").get<double>() == 2.5 &&
                         custom_report.at("queries").get<std::size_t>() == 4;

  const bool ok = qps_ok && defaults_ok && custom_ok;
  return {ok, "qps " + fmt(report.at("qps").get<double>()) +
                  ", reference rows 0.15/5/8.4 ingested, custom rows honoured"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: ranklab_acceptance <path-to-ranklab-cli>" << std::endl;
    return 2;
  }
  g_cli = argv[1];
  g_work = fs::temp_directory_path() / ("ranklab-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(g_work);

  run_criterion(1, "gradient-correctness", criterion_gradients);
  run_criterion(2, "ndcg-permutation-oracle", criterion_ndcg_oracle);
  run_criterion(3, "hand-computed-fixtures", criterion_fixtures);
  run_criterion(4, "mining-bound", criterion_mining);

  SmallWorld world;
  try {
    world = make_small_world();
  } catch (const std::exception& e) {
    std::cerr << "fixture setup failed: " << e.what() << std::endl;
    return 1;
  }
  run_criterion(5, "pipeline-invariants", [&] { return criterion_pipeline(world); });
  run_criterion(6, "distillation-study", criterion_study);
  run_criterion(7, "determinism", [&] { return criterion_determinism(world); });
  run_criterion(8, "throughput-harness", [&] { return criterion_throughput(world); });

  std::cout << "RESULT: " << g_passed << "/8 criteria passed" << std::endl;
  std::error_code ec;
  fs::remove_all(g_work, ec);
  return g_failed == 0 ? 0 : 1;
}
