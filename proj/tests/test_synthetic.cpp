#include <doctest.h>

#include <set>
#include <sstream>

#include "ranklab/synthetic.hpp"
#include "test_util.hpp"

using namespace ranklab;

namespace {

SyntheticSpec small_spec(std::uint64_t seed = 3) {
  SyntheticSpec spec;
  spec.doc_count = 120;
  spec.train_query_count = 25;
  spec.eval_query_count = 10;
  spec.vocab_size = 80;
  spec.topic_count = 8;
  spec.embedding_dim = 6;
  spec.seed = seed;
  return spec;
}

std::string fingerprint(const SyntheticData& data) {
  std::ostringstream out;
  for (const auto& doc : data.corpus.docs()) out << doc.doc_id << '|' << doc.text << '\n';
  for (const auto& q : data.train_queries) out << q.query_id << '|' << q.text << '\n';
  for (const auto& q : data.eval_queries) out << q.query_id << '|' << q.text << '\n';
  const Vector* v = data.embeddings.find(data.corpus.at(0).doc_id);
  if (v != nullptr) out << v->transpose() << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("generator honours the requested sizes") {
  const SyntheticData data = generate_synthetic(small_spec());
  CHECK(data.corpus.size() == 120);
  CHECK(data.train_queries.size() == 25);
  CHECK(data.eval_queries.size() == 10);
  // embeddings and expansions cover docs and all queries
  CHECK(data.embeddings.size() == 120 + 25 + 10);
  CHECK(data.expansion.size() == 120 + 25 + 10);
  CHECK(data.embeddings.dimension() == 6);
}

TEST_CASE("ids are disjoint, padded and unique") {
  const SyntheticData data = generate_synthetic(small_spec());
  std::set<std::string> ids;
  for (const auto& doc : data.corpus.docs()) {
    CHECK(doc.doc_id.rfind("d", 0) == 0);
    CHECK(ids.insert(doc.doc_id).second);
  }
  for (const auto& q : data.train_queries) {
    CHECK(q.query_id.rfind("train-q", 0) == 0);
    CHECK(ids.insert(q.query_id).second);
  }
  for (const auto& q : data.eval_queries) {
    CHECK(q.query_id.rfind("eval-q", 0) == 0);
    CHECK(ids.insert(q.query_id).second);
  }
}

TEST_CASE("documents and queries respect the token length bounds") {
  const SyntheticSpec spec = small_spec();
  const SyntheticData data = generate_synthetic(spec);
  for (const auto& q : data.train_queries) {
    std::istringstream words(q.text);
    std::size_t count = 0;
    std::string w;
    while (words >> w) ++count;
    CHECK(count >= spec.min_query_tokens);
    CHECK(count <= spec.max_query_tokens);
  }
}

TEST_CASE("embeddings are unit norm") {
  const SyntheticData data = generate_synthetic(small_spec());
  for (const auto& doc : data.corpus.docs()) {
    const Vector* v = data.embeddings.find(doc.doc_id);
    REQUIRE(v != nullptr);
    CHECK(v->norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("expansion weights are positive") {
  const SyntheticData data = generate_synthetic(small_spec());
  const auto* weights = data.expansion.find(data.corpus.at(0).doc_id);
  REQUIRE(weights != nullptr);
  CHECK_FALSE(weights->empty());
  for (const auto& [term, w] : *weights) CHECK(w > 0.0);
}

TEST_CASE("generation is deterministic per seed") {
  CHECK(fingerprint(generate_synthetic(small_spec(3))) ==
        fingerprint(generate_synthetic(small_spec(3))));
  CHECK(fingerprint(generate_synthetic(small_spec(3))) !=
        fingerprint(generate_synthetic(small_spec(4))));
}

TEST_CASE("spec validation rejects bad shapes") {
  SyntheticSpec spec = small_spec();
  spec.doc_count = 0;
  CHECK_THROWS_AS(spec.validate(), IntegrityError);

  spec = small_spec();
  spec.vocab_size = 10;  // < 4 * topics
  CHECK_THROWS_AS(spec.validate(), IntegrityError);

  spec = small_spec();
  spec.topic_count = 1;
  CHECK_THROWS_AS(spec.validate(), IntegrityError);

  spec = small_spec();
  spec.min_doc_tokens = 50;
  spec.max_doc_tokens = 20;
  CHECK_THROWS_AS(spec.validate(), IntegrityError);

  CHECK_NOTHROW(small_spec().validate());
}
