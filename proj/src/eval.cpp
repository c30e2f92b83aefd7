#include "ranklab/eval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ranklab/run_file.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

using nlohmann::json;

namespace {

double gain_of(int grade, GainMode mode) {
  if (mode == GainMode::linear) return static_cast<double>(grade);
  return std::pow(2.0, static_cast<double>(grade)) - 1.0;
}

}  // namespace

double dcg_at_k(const std::vector<std::string>& ranking, const Qrels::DocGrades& grades,
                std::size_t k, GainMode gain) {
  if (k < 1) throw IntegrityError("dcg cutoff must be >= 1");
  const std::size_t depth = std::min(k, ranking.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    const auto it = grades.find(ranking[i]);
    if (it == grades.end()) continue;
    dcg += gain_of(it->second, gain) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

double ndcg_at_k(const std::vector<std::string>& ranking, const Qrels::DocGrades& grades,
                 std::size_t k, GainMode gain) {
  std::vector<int> judged;
  judged.reserve(grades.size());
  bool any_positive = false;
  for (const auto& [doc_id, grade] : grades) {
    judged.push_back(grade);
    any_positive = any_positive || grade > 0;
  }
  if (!any_positive) return 0.0;
  std::sort(judged.begin(), judged.end(), std::greater<>());
  double ideal = 0.0;
  const std::size_t depth = std::min(k, judged.size());
  for (std::size_t i = 0; i < depth; ++i) {
    ideal += gain_of(judged[i], gain) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg_at_k(ranking, grades, k, gain) / ideal;
}

RunEvaluation evaluate_run(const std::vector<RankedList>& run, const Dataset& dataset,
                           std::size_t k, GainMode gain) {
  std::set<std::string> known;
  for (const auto& q : dataset.queries) known.insert(q.query_id);
  std::unordered_map<std::string, const RankedList*> by_query;
  for (const auto& list : run) {
    if (known.count(list.query_id) == 0) {
      throw IntegrityError("run references query '" + list.query_id +
                           "' not in dataset '" + dataset.name + "'");
    }
    by_query[list.query_id] = &list;
  }
  RunEvaluation result;
  double sum = 0.0;
  for (const auto& query : dataset.queries) {
    const auto* grades = dataset.qrels.find(query.query_id);
    if (grades == nullptr || !dataset.qrels.has_positive(query.query_id)) {
      ++result.skipped;
      continue;
    }
    std::vector<std::string> ranking;
    if (const auto it = by_query.find(query.query_id); it != by_query.end()) {
      ranking.reserve(it->second->entries.size());
      for (const auto& e : it->second->entries) ranking.push_back(e.doc_id);
    }
    const double score = ndcg_at_k(ranking, *grades, k, gain);
    result.per_query.push_back({query.query_id, score});
    sum += score;
    ++result.evaluated;
  }
  result.mean_ndcg = result.evaluated == 0 ? 0.0 : sum / static_cast<double>(result.evaluated);
  return result;
}

EvalReport aggregate(const DatasetScores& model, const DatasetScores& baseline,
                     const GroupAssignment& groups) {
  std::unordered_map<std::string, double> baseline_by_name;
  for (const auto& [name, value] : baseline) baseline_by_name[name] = value;
  std::unordered_map<std::string, std::string> group_of;
  for (const auto& [name, group] : groups) group_of[name] = group;

  EvalReport report;
  report.per_dataset = model;
  std::vector<std::string> group_order;
  std::unordered_map<std::string, std::pair<double, std::size_t>> group_sums;
  double model_sum = 0.0, baseline_sum = 0.0;
  for (const auto& [name, value] : model) {
    const auto group_it = group_of.find(name);
    if (group_it == group_of.end()) {
      throw IntegrityError("dataset '" + name + "' has no group assignment");
    }
    const auto baseline_it = baseline_by_name.find(name);
    if (baseline_it == baseline_by_name.end()) {
      throw IntegrityError("baseline report is missing dataset '" + name + "'");
    }
    auto [it, inserted] = group_sums.try_emplace(group_it->second, std::pair{0.0, std::size_t{0}});
    if (inserted) group_order.push_back(group_it->second);
    it->second.first += value;
    it->second.second += 1;
    model_sum += value;
    baseline_sum += baseline_it->second;
    const double delta = value - baseline_it->second;
    report.baseline_deltas.emplace_back(name, delta);
    if (delta > 0.0) report.improved_datasets.push_back(name);
  }
  if (model.empty()) throw IntegrityError("cannot aggregate an empty report");
  for (const auto& group : group_order) {
    const auto& [sum, count] = group_sums.at(group);
    report.per_group.emplace_back(group, sum / static_cast<double>(count));
  }
  report.overall = model_sum / static_cast<double>(model.size());
  report.baseline_overall = baseline_sum / static_cast<double>(model.size());
  report.improved_overall = report.overall > report.baseline_overall;
  return report;
}

std::vector<ChartRow> compare_chart_data(const DatasetScores& model,
                                         const DatasetScores& baseline) {
  if (model.size() != baseline.size()) {
    throw IntegrityError("chart reports cover different dataset counts");
  }
  std::unordered_map<std::string, double> baseline_by_name;
  for (const auto& [name, value] : baseline) baseline_by_name[name] = value;
  std::vector<ChartRow> rows;
  rows.reserve(model.size());
  for (const auto& [name, value] : model) {
    const auto it = baseline_by_name.find(name);
    if (it == baseline_by_name.end()) {
      throw IntegrityError("baseline chart report is missing dataset '" + name + "'");
    }
    rows.push_back({name, it->second, value, value - it->second});
  }
  std::sort(rows.begin(), rows.end(), [](const ChartRow& a, const ChartRow& b) {
    if (a.delta != b.delta) return a.delta < b.delta;
    return a.dataset < b.dataset;
  });
  return rows;
}

void save_chart_csv(const std::vector<ChartRow>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "dataset,baseline,model,delta\n";
  for (const auto& row : rows) {
    out << row.dataset << ',' << format_double(row.baseline) << ',' << format_double(row.model)
        << ',' << format_double(row.delta) << '\n';
  }
}

double queries_per_second(std::size_t queries_processed, double wall_seconds) {
  if (wall_seconds <= 0.0) throw IntegrityError("wall time must be positive");
  return static_cast<double>(queries_processed) / wall_seconds;
}

ThroughputReport measure_throughput(const std::string& model_tag, std::size_t request_count,
                                    const std::function<void(std::size_t)>& rerank_one) {
  if (request_count == 0) throw IntegrityError("throughput needs a non-empty request stream");
  ThroughputReport report;
  report.model_tag = model_tag;
  report.queries_processed = request_count;
  std::chrono::steady_clock::duration total{0};
  for (std::size_t i = 0; i < request_count; ++i) {
    const auto start = std::chrono::steady_clock::now();
    rerank_one(i);
    total += std::chrono::steady_clock::now() - start;
  }
  report.wall_seconds = std::chrono::duration<double>(total).count();
  report.qps = queries_per_second(request_count, report.wall_seconds);
  return report;
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw IntegrityError("kendall_tau inputs differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  std::int64_t concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(concordant + discordant + ties_a) *
                    static_cast<double>(concordant + discordant + ties_b);
  if (n0 <= 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / std::sqrt(n0);
}

void save_report_json(const std::map<std::string, EvalReport>& models_by_tag,
                      const std::string& baseline_tag, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  json root;
  root["baseline"] = baseline_tag;
  json models = json::object();
  for (const auto& [tag, report] : models_by_tag) {
    json entry;
    json per_dataset = json::object();
    for (const auto& [name, value] : report.per_dataset) per_dataset[name] = value;
    json per_group = json::object();
    for (const auto& [name, value] : report.per_group) per_group[name] = value;
    json deltas = json::object();
    for (const auto& [name, value] : report.baseline_deltas) deltas[name] = value;
    entry["per_dataset"] = std::move(per_dataset);
    entry["per_group"] = std::move(per_group);
    entry["overall"] = report.overall;
    entry["baseline_overall"] = report.baseline_overall;
    entry["baseline_deltas"] = std::move(deltas);
    entry["improved_datasets"] = report.improved_datasets;
    entry["improved_overall"] = report.improved_overall;
    models[tag] = std::move(entry);
  }
  root["models"] = std::move(models);
  out << root.dump(2) << '\n';
}

std::string render_report_table(const std::vector<std::pair<std::string, EvalReport>>& models,
                                const std::string& baseline_tag) {
  // union of groups in first-appearance order
  std::vector<std::string> groups;
  for (const auto& [tag, report] : models) {
    for (const auto& [group, value] : report.per_group) {
      if (std::find(groups.begin(), groups.end(), group) == groups.end()) {
        groups.push_back(group);
      }
    }
  }
  std::size_t name_width = std::string("Model").size();
  for (const auto& [tag, report] : models) name_width = std::max(name_width, tag.size());

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Model" << std::right
      << std::setw(10) << "Average";
  for (const auto& group : groups) out << std::setw(10) << group;
  out << '\n';

  const EvalReport* baseline = nullptr;
  for (const auto& [tag, report] : models) {
    if (tag == baseline_tag) baseline = &report;
  }
  out << std::fixed << std::setprecision(2);
  for (const auto& [tag, report] : models) {
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << tag << std::right;
    const bool starred = tag != baseline_tag && report.improved_overall;
    out << std::setw(starred ? 9 : 10) << report.overall * 100.0 << (starred ? "*" : "");
    for (const auto& group : groups) {
      double value = 0.0;
      bool found = false;
      for (const auto& [g, v] : report.per_group) {
        if (g == group) {
          value = v;
          found = true;
        }
      }
      if (!found) {
        out << std::setw(10) << "-";
        continue;
      }
      bool group_star = false;
      if (baseline != nullptr && tag != baseline_tag) {
        for (const auto& [g, v] : baseline->per_group) {
          if (g == group) group_star = value > v;
        }
      }
      out << std::setw(group_star ? 9 : 10) << value * 100.0 << (group_star ? "*" : "");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ranklab
