#include "ranklab/distill.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ranklab/run_file.hpp"

namespace ranklab {

using nlohmann::json;

int Candidate::best_rank() const {
  int best = std::numeric_limits<int>::max();
  for (const auto& [tag, source] : sources) best = std::min(best, source.rank);
  return sources.empty() ? 0 : best;
}

CandidatePool mine_candidates(const Query& query,
                              std::span<const Retriever* const> retrievers,
                              std::size_t per_retriever_k) {
  if (per_retriever_k < 1) throw IntegrityError("per-retriever k must be >= 1");
  std::map<std::string, Candidate> merged;  // doc_id -> candidate, sorted
  for (const auto* retriever : retrievers) {
    const RankedList list = retriever->topk(query, per_retriever_k);
    int rank = 1;
    for (const auto& entry : list.entries) {
      auto& candidate = merged[entry.doc_id];
      candidate.doc_id = entry.doc_id;
      candidate.sources[retriever->tag()] = {rank, entry.score};
      ++rank;
    }
  }
  CandidatePool pool;
  pool.query_id = query.query_id;
  pool.candidates.reserve(merged.size());
  for (auto& [doc_id, candidate] : merged) pool.candidates.push_back(std::move(candidate));
  return pool;
}

void save_pools(const std::vector<CandidatePool>& pools, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const auto& pool : pools) {
    json candidates = json::array();
    for (const auto& c : pool.candidates) {
      json sources = json::object();
      for (const auto& [tag, s] : c.sources) {
        sources[tag] = {{"rank", s.rank}, {"score", s.score}};
      }
      candidates.push_back({{"doc_id", c.doc_id}, {"sources", std::move(sources)}});
    }
    json obj{{"query_id", pool.query_id}, {"candidates", std::move(candidates)}};
    out << obj.dump() << '\n';
  }
}

std::vector<CandidatePool> load_pools(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<CandidatePool> pools;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed pool line");
    }
    CandidatePool pool;
    pool.query_id = obj.at("query_id").get<std::string>();
    for (const auto& c : obj.at("candidates")) {
      Candidate candidate;
      candidate.doc_id = c.at("doc_id").get<std::string>();
      for (const auto& [tag, s] : c.at("sources").items()) {
        candidate.sources[tag] = {s.at("rank").get<int>(), s.at("score").get<double>()};
      }
      pool.candidates.push_back(std::move(candidate));
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

MlpTeacher::MlpTeacher(MlpScorer model, const FeatureExtractor& extractor)
    : model_(std::move(model)), extractor_(extractor) {}

double MlpTeacher::score(const Query& query, const std::string& doc_id,
                         const PairSignals& signals) const {
  return model_.forward(extractor_.extract(query, doc_id, signals));
}

FileTeacher::FileTeacher(const std::filesystem::path& path, std::string tag)
    : tag_(std::move(tag)) {
  const TeacherScores scores = TeacherScores::load_tsv(path);
  for (const auto& query_id : scores.query_order()) {
    scores_[query_id] = *scores.find(query_id);
  }
}

double FileTeacher::score(const Query& query, const std::string& doc_id,
                          const PairSignals& signals) const {
  (void)signals;
  const auto qit = scores_.find(query.query_id);
  if (qit != scores_.end()) {
    const auto dit = qit->second.find(doc_id);
    if (dit != qit->second.end()) return dit->second;
  }
  throw IntegrityError("teacher has no score for pair (" + query.query_id + ", " + doc_id + ")");
}

void TeacherScores::add(const std::string& query_id, const std::string& doc_id, double score) {
  auto [it, inserted] = scores_.try_emplace(query_id);
  if (inserted) query_order_.push_back(query_id);
  it->second[doc_id] = score;
}

const std::map<std::string, double>* TeacherScores::find(const std::string& query_id) const {
  const auto it = scores_.find(query_id);
  return it == scores_.end() ? nullptr : &it->second;
}

std::size_t TeacherScores::pair_count() const {
  std::size_t n = 0;
  for (const auto& [q, docs] : scores_) n += docs.size();
  return n;
}

void TeacherScores::save_tsv(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const auto& query_id : query_order_) {
    for (const auto& [doc_id, score] : scores_.at(query_id)) {
      out << query_id << '\t' << doc_id << '\t' << format_double(score) << '\n';
    }
  }
}

TeacherScores TeacherScores::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  TeacherScores scores;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream row(line);
    std::string query_id, doc_id, score_text;
    if (!std::getline(row, query_id, '\t') || !std::getline(row, doc_id, '\t') ||
        !std::getline(row, score_text, '\t')) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 3 TSV columns");
    }
    double value = 0.0;
    const auto* begin = score_text.data();
    const auto* end = begin + score_text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad score '" +
                       score_text + "'");
    }
    scores.add(query_id, doc_id, value);
  }
  return scores;
}

void score_pool(const PairTeacher& teacher, const Query& query, const CandidatePool& pool,
                const SignalProvider& signals, TeacherScores& out) {
  for (const auto& candidate : pool.candidates) {
    const auto pair = signals.at(query, candidate.doc_id, candidate.best_rank());
    out.add(query.query_id, candidate.doc_id, teacher.score(query, candidate.doc_id, pair));
  }
  out.teacher_tag = teacher.tag();
}

TrainingSet build_mse_set(const TeacherScores& scores) {
  TrainingSet set;
  set.kind = LossKind::mse;
  for (const auto& query_id : scores.query_order()) {
    const auto* docs = scores.find(query_id);
    if (docs == nullptr || docs->empty()) {
      std::cerr << "warning: query '" << query_id << "' has no scored candidates\n";
      continue;
    }
    for (const auto& [doc_id, score] : *docs) {
      set.mse.push_back({query_id, doc_id, score});
    }
  }
  return set;
}

PermutationSetResult build_permutation_set(const TeacherScores& scores,
                                           std::size_t list_length) {
  if (list_length < 2) throw IntegrityError("permutation length must be >= 2");
  PermutationSetResult result;
  result.set.kind = LossKind::ranknet;
  for (const auto& query_id : scores.query_order()) {
    const auto* docs = scores.find(query_id);
    if (docs == nullptr || docs->size() < 2) {
      ++result.skipped_queries;
      continue;
    }
    std::vector<ScoredDoc> entries;
    entries.reserve(docs->size());
    for (const auto& [doc_id, score] : *docs) entries.push_back({doc_id, score});
    entries = rank_entries(std::move(entries), list_length);
    PermutationSample sample;
    sample.query_id = query_id;
    sample.ordered_doc_ids.reserve(entries.size());
    for (const auto& e : entries) sample.ordered_doc_ids.push_back(e.doc_id);
    result.set.ranknet.push_back(std::move(sample));
  }
  return result;
}

TrainingSet build_bce_set(const std::vector<CandidatePool>& pools, const Qrels& qrels,
                          std::size_t negatives_per_positive, Rng& rng) {
  TrainingSet set;
  set.kind = LossKind::bce;
  for (const auto& pool : pools) {
    std::vector<const std::string*> positives;
    std::vector<const std::string*> negatives;
    for (const auto& candidate : pool.candidates) {
      if (qrels.grade(pool.query_id, candidate.doc_id) > 0) {
        positives.push_back(&candidate.doc_id);
      } else {
        negatives.push_back(&candidate.doc_id);
      }
    }
    if (positives.empty()) continue;
    rng.shuffle(negatives);
    std::size_t next_negative = 0;
    for (const auto* doc_id : positives) {
      set.bce.push_back({pool.query_id, *doc_id, 1});
      for (std::size_t i = 0; i < negatives_per_positive && next_negative < negatives.size();
           ++i, ++next_negative) {
        set.bce.push_back({pool.query_id, *negatives[next_negative], 0});
      }
    }
  }
  return set;
}

}  // namespace ranklab
