#include "ranklab/index.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "ranklab/text.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

using nlohmann::json;

InvertedIndex InvertedIndex::build(const Corpus& corpus) {
  std::vector<std::vector<std::string>> doc_tokens;
  doc_tokens.reserve(corpus.size());
  for (const auto& doc : corpus.docs()) {
    doc_tokens.push_back(tokenize_fields(doc.title, doc.text));
  }
  return build(corpus, doc_tokens);
}

InvertedIndex InvertedIndex::build(const Corpus& corpus,
                                   const std::vector<std::vector<std::string>>& doc_tokens) {
  if (corpus.empty()) throw IntegrityError("cannot build an index over an empty corpus");
  if (doc_tokens.size() != corpus.size()) {
    throw IntegrityError("token cache size does not match corpus size");
  }
  InvertedIndex index;
  index.doc_count_ = static_cast<std::int64_t>(corpus.size());
  index.doc_lengths_.resize(corpus.size());
  std::int64_t total_length = 0;
  std::map<std::string, std::int32_t> tf;  // reused per doc
  for (std::size_t ordinal = 0; ordinal < corpus.size(); ++ordinal) {
    const auto& tokens = doc_tokens[ordinal];
    index.doc_lengths_[ordinal] = static_cast<std::int32_t>(tokens.size());
    total_length += static_cast<std::int64_t>(tokens.size());
    tf.clear();
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({static_cast<std::int32_t>(ordinal), count});
    }
  }
  index.avg_doc_length_ =
      static_cast<double>(total_length) / static_cast<double>(index.doc_count_);
  return index;
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

std::int64_t InvertedIndex::doc_frequency(const std::string& term) const {
  const auto* list = postings(term);
  return list == nullptr ? 0 : static_cast<std::int64_t>(list->size());
}

double InvertedIndex::idf(const std::string& term) const {
  const double df = static_cast<double>(doc_frequency(term));
  const double n = static_cast<double>(doc_count_);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

namespace {

double tf_weight(double tf, double k1, double b, double len, double avgdl) {
  return tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avgdl));
}

}  // namespace

double InvertedIndex::bm25_score(const Bm25Params& params,
                                 const std::vector<std::string>& query_terms,
                                 std::int32_t ordinal) const {
  const double len = static_cast<double>(doc_length(ordinal));
  double score = 0.0;
  for (const auto& term : query_terms) {
    const auto* list = postings(term);
    if (list == nullptr) continue;
    const auto it = std::lower_bound(
        list->begin(), list->end(), ordinal,
        [](const Posting& p, std::int32_t doc) { return p.doc < doc; });
    if (it == list->end() || it->doc != ordinal) continue;
    score += idf(term) *
             tf_weight(static_cast<double>(it->tf), params.k1, params.b, len, avg_doc_length_);
  }
  return score;
}

std::vector<double> InvertedIndex::bm25_score_all(
    const Bm25Params& params, const std::vector<std::string>& query_terms) const {
  std::vector<double> scores(static_cast<std::size_t>(doc_count_), 0.0);
  for (const auto& term : query_terms) {
    const auto* list = postings(term);
    if (list == nullptr) continue;
    const double w = idf(term);
    for (const auto& posting : *list) {
      scores[static_cast<std::size_t>(posting.doc)] +=
          w * tf_weight(static_cast<double>(posting.tf), params.k1, params.b,
                        static_cast<double>(doc_length(posting.doc)), avg_doc_length_);
    }
  }
  return scores;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  json root;
  root["format_version"] = 1;
  root["doc_count"] = doc_count_;
  root["doc_lengths"] = doc_lengths_;
  json terms = json::object();
  // json object keys are sorted, so the file is deterministic.
  for (const auto& [term, list] : postings_) {
    json flat = json::array();
    for (const auto& p : list) {
      flat.push_back(p.doc);
      flat.push_back(p.tf);
    }
    terms[term] = std::move(flat);
  }
  root["postings"] = std::move(terms);
  out << root.dump() << '\n';
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded()) throw ParseError(path.string() + ": malformed index file");
  InvertedIndex index;
  index.doc_count_ = root.at("doc_count").get<std::int64_t>();
  index.doc_lengths_ = root.at("doc_lengths").get<std::vector<std::int32_t>>();
  std::int64_t total = 0;
  for (const auto len : index.doc_lengths_) total += len;
  index.avg_doc_length_ = static_cast<double>(total) / static_cast<double>(index.doc_count_);
  for (const auto& [term, flat] : root.at("postings").items()) {
    auto& list = index.postings_[term];
    list.reserve(flat.size() / 2);
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
      list.push_back({flat[i].get<std::int32_t>(), flat[i + 1].get<std::int32_t>()});
    }
  }
  return index;
}

}  // namespace ranklab
