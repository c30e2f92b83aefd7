#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "ranklab/corpus.hpp"

namespace ranklab {

struct Posting {
  std::int32_t doc;  // ordinal into the corpus
  std::int32_t tf;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Term-at-a-time inverted index over title+text tokens. Immutable after
// build.
class InvertedIndex {
 public:
  static InvertedIndex build(const Corpus& corpus);
  // Build from pre-tokenized documents (one token vector per corpus doc).
  static InvertedIndex build(const Corpus& corpus,
                             const std::vector<std::vector<std::string>>& doc_tokens);

  const std::vector<Posting>* postings(const std::string& term) const;
  std::int64_t doc_frequency(const std::string& term) const;
  std::int32_t doc_length(std::int32_t ordinal) const {
    return doc_lengths_[static_cast<std::size_t>(ordinal)];
  }
  double avg_doc_length() const { return avg_doc_length_; }
  std::int64_t doc_count() const { return doc_count_; }

  // Robertson/Lucene IDF, always non-negative: ln(1 + (N - df + 0.5) / (df + 0.5)).
  double idf(const std::string& term) const;

  // BM25 score of one document for a tokenized query. Terms absent from the
  // document contribute 0; duplicated query tokens contribute once each.
  double bm25_score(const Bm25Params& params, const std::vector<std::string>& query_terms,
                    std::int32_t ordinal) const;

  // BM25 scores for every document in the corpus (dense vector of size N).
  std::vector<double> bm25_score_all(const Bm25Params& params,
                                     const std::vector<std::string>& query_terms) const;

  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::int32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  std::int64_t doc_count_ = 0;
};

}  // namespace ranklab
