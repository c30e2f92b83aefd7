#include "ranklab/synthetic.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <unordered_map>

#include "ranklab/rng.hpp"
#include "ranklab/types.hpp"

namespace ranklab {

namespace {

std::string padded_id(const char* prefix, std::size_t i, int width) {
  std::ostringstream out;
  out << prefix << std::setw(width) << std::setfill('0') << i;
  return out.str();
}

// Quadratic skew toward the front of a topic's term slice, so a few terms
// per topic dominate and term frequencies vary.
std::size_t skewed_index(Rng& rng, std::size_t size) {
  const double u = rng.uniform();
  auto idx = static_cast<std::size_t>(u * u * static_cast<double>(size));
  return idx >= size ? size - 1 : idx;
}

Vector unit_noisy(const Vector& base, double noise, Rng& rng) {
  Vector v = base;
  const double sigma = noise / std::sqrt(static_cast<double>(base.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += sigma * rng.normal();
  const double norm = v.norm();
  if (norm <= 0.0) throw IntegrityError("degenerate synthetic embedding");
  return v / norm;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (doc_count == 0) throw IntegrityError("synthetic spec needs at least one document");
  if (train_query_count == 0) throw IntegrityError("synthetic spec needs training queries");
  if (eval_query_count == 0) throw IntegrityError("synthetic spec needs evaluation queries");
  if (topic_count < 2) throw IntegrityError("synthetic spec needs at least two topics");
  if (vocab_size < topic_count * 4) {
    throw IntegrityError("synthetic vocabulary too small for the topic count");
  }
  if (embedding_dim < 2) throw IntegrityError("embedding dimension must be at least 2");
  if (min_doc_tokens == 0 || max_doc_tokens < min_doc_tokens) {
    throw IntegrityError("invalid document length range");
  }
  if (min_query_tokens == 0 || max_query_tokens < min_query_tokens) {
    throw IntegrityError("invalid query length range");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Rng root(spec.seed);

  std::vector<std::string> vocab(spec.vocab_size);
  for (std::size_t i = 0; i < spec.vocab_size; ++i) vocab[i] = padded_id("w", i, 4);
  const std::size_t slice = spec.vocab_size / spec.topic_count;

  auto topic_term = [&](std::size_t topic, Rng& rng) -> const std::string& {
    return vocab[topic * slice + skewed_index(rng, slice)];
  };

  Rng topics_rng = root.fork("topics");
  std::vector<Vector> centroids;
  centroids.reserve(spec.topic_count);
  for (std::size_t t = 0; t < spec.topic_count; ++t) {
    Vector c(spec.embedding_dim);
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = topics_rng.normal();
    centroids.push_back(c / c.norm());
  }

  Corpus corpus;
  std::unordered_map<std::string, Vector> vectors;
  std::unordered_map<std::string, SparseExpansionModel::WeightMap> weights;
  vectors.reserve(spec.doc_count + spec.train_query_count + spec.eval_query_count);

  Rng docs_rng = root.fork("documents");
  for (std::size_t d = 0; d < spec.doc_count; ++d) {
    const auto primary = static_cast<std::size_t>(
        docs_rng.uniform_int(0, static_cast<std::int64_t>(spec.topic_count) - 1));
    std::size_t secondary = primary;
    while (secondary == primary) {
      secondary = static_cast<std::size_t>(
          docs_rng.uniform_int(0, static_cast<std::int64_t>(spec.topic_count) - 1));
    }

    const auto body_len = static_cast<std::size_t>(
        docs_rng.uniform_int(static_cast<std::int64_t>(spec.min_doc_tokens),
                             static_cast<std::int64_t>(spec.max_doc_tokens)));
    std::string title;
    const auto title_len = static_cast<std::size_t>(docs_rng.uniform_int(2, 3));
    for (std::size_t i = 0; i < title_len; ++i) {
      if (i > 0) title += ' ';
      title += topic_term(primary, docs_rng);
    }
    std::string text;
    SparseExpansionModel::WeightMap doc_weights;
    for (std::size_t i = 0; i < body_len; ++i) {
      const double u = docs_rng.uniform();
      const std::string* term;
      if (u < 0.70) {
        term = &topic_term(primary, docs_rng);
      } else if (u < 0.85) {
        term = &topic_term(secondary, docs_rng);
      } else {
        term = &vocab[static_cast<std::size_t>(
            docs_rng.uniform_int(0, static_cast<std::int64_t>(spec.vocab_size) - 1))];
      }
      if (i > 0) text += ' ';
      text += *term;
      doc_weights[*term] += docs_rng.uniform(0.8, 1.2);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      doc_weights[topic_term(primary, docs_rng)] += docs_rng.uniform(0.2, 0.6);
    }

    const std::string doc_id = padded_id("d", d, 6);
    Vector mix = centroids[primary] + 0.35 * centroids[secondary];
    vectors.emplace(doc_id, unit_noisy(mix, 0.35, docs_rng));
    weights.emplace(doc_id, std::move(doc_weights));
    corpus.add({doc_id, std::move(title), std::move(text)});
  }

  auto make_queries = [&](const char* prefix, std::size_t count, Rng rng) {
    std::vector<Query> queries;
    queries.reserve(count);
    for (std::size_t q = 0; q < count; ++q) {
      const auto topic = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(spec.topic_count) - 1));
      const auto len = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(spec.min_query_tokens),
                          static_cast<std::int64_t>(spec.max_query_tokens)));
      std::string text;
      SparseExpansionModel::WeightMap query_weights;
      for (std::size_t i = 0; i < len; ++i) {
        const std::string* term;
        if (rng.uniform() < 0.85) {
          term = &topic_term(topic, rng);
        } else {
          term = &vocab[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(spec.vocab_size) - 1))];
        }
        if (i > 0) text += ' ';
        text += *term;
        query_weights[*term] += rng.uniform(0.8, 1.2);
      }
      for (std::size_t i = 0; i < 2; ++i) {
        query_weights[topic_term(topic, rng)] += rng.uniform(0.2, 0.5);
      }
      const std::string query_id = padded_id(prefix, q, 5);
      vectors.emplace(query_id, unit_noisy(centroids[topic], 0.25, rng));
      weights.emplace(query_id, std::move(query_weights));
      queries.push_back({query_id, std::move(text)});
    }
    return queries;
  };

  std::vector<Query> train_queries =
      make_queries("train-q", spec.train_query_count, root.fork("train-queries"));
  std::vector<Query> eval_queries =
      make_queries("eval-q", spec.eval_query_count, root.fork("eval-queries"));

  return SyntheticData{std::move(corpus), std::move(train_queries), std::move(eval_queries),
                       EmbeddingTable(spec.embedding_dim, std::move(vectors)),
                       SparseExpansionModel(std::move(weights))};
}

}  // namespace ranklab
