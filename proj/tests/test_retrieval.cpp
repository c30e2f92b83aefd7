#include <doctest.h>

#include <cmath>

#include "ranklab/index.hpp"
#include "ranklab/retrieval.hpp"
#include "test_util.hpp"

using namespace ranklab;
using testutil::TempDir;

namespace {

Corpus fruit_corpus() {
  return testutil::corpus_of({{"d1", "apple banana apple"},
                              {"d2", "banana cherry"},
                              {"d3", "durian"}});
}

}  // namespace

TEST_CASE("rank_entries sorts by score desc then doc_id asc and truncates") {
  std::vector<ScoredDoc> entries = {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}, {"d", 0.5}};
  const auto top = rank_entries(entries, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].doc_id == "c");
  CHECK(top[1].doc_id == "a");
  CHECK(top[2].doc_id == "b");
  CHECK(rank_entries(entries, 100).size() == 4);
  CHECK(rank_entries({}, 5).empty());
}

TEST_CASE("inverted index statistics") {
  const Corpus corpus = fruit_corpus();
  const InvertedIndex index = InvertedIndex::build(corpus);
  CHECK(index.doc_count() == 3);
  CHECK(index.avg_doc_length() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(index.doc_length(0) == 3);
  CHECK(index.doc_length(2) == 1);
  CHECK(index.doc_frequency("banana") == 2);
  CHECK(index.doc_frequency("apple") == 1);
  CHECK(index.doc_frequency("kiwi") == 0);
  REQUIRE(index.postings("apple") != nullptr);
  CHECK((*index.postings("apple"))[0].tf == 2);
  CHECK(index.postings("kiwi") == nullptr);
}

TEST_CASE("index counts title tokens") {
  Corpus corpus;
  corpus.add({"d1", "Apple Pie", "banana"});
  const InvertedIndex index = InvertedIndex::build(corpus);
  CHECK(index.doc_length(0) == 3);
  CHECK(index.doc_frequency("apple") == 1);
  CHECK(index.doc_frequency("pie") == 1);
}

TEST_CASE("bm25 matches the hand-computed value") {
  // df=1, N=3: idf = ln(1 + 2.5/1.5); tf=2, dl=3, avgdl=2:
  // tf_norm = 2*2.2 / (2 + 1.2*(0.25 + 0.75*1.5)) = 4.4/3.65.
  const Corpus corpus = fruit_corpus();
  const InvertedIndex index = InvertedIndex::build(corpus);
  CHECK(index.idf("apple") == doctest::Approx(std::log(8.0 / 3.0)).epsilon(1e-12));
  const double expected = 1.1823695104798895;
  CHECK(index.bm25_score({}, {"apple"}, 0) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(index.bm25_score({}, {"apple"}, 1) == 0.0);
  CHECK(index.bm25_score({}, {"kiwi"}, 0) == 0.0);
  // every query token occurrence contributes its term score
  CHECK(index.bm25_score({}, {"apple", "apple"}, 0) ==
        doctest::Approx(2 * expected).epsilon(1e-9));
  const auto all = index.bm25_score_all({}, {"apple"});
  REQUIRE(all.size() == 3);
  CHECK(all[0] == doctest::Approx(expected).epsilon(1e-9));
  CHECK(all[1] == 0.0);
}

TEST_CASE("bm25 idf stays non-negative even for ubiquitous terms") {
  Corpus corpus = testutil::corpus_of({{"d1", "common"}, {"d2", "common"}, {"d3", "common"}});
  const InvertedIndex index = InvertedIndex::build(corpus);
  CHECK(index.idf("common") > 0.0);
  CHECK(index.idf("common") == doctest::Approx(std::log(1 + 0.5 / 3.5)).epsilon(1e-12));
}

TEST_CASE("bm25 retriever scores the whole corpus and breaks ties by id") {
  const Corpus corpus = fruit_corpus();
  const Bm25Retriever retriever(corpus, InvertedIndex::build(corpus));
  const RankedList list = retrieve_topk(retriever, {"q1", "apple"}, 10);
  REQUIRE(list.entries.size() == 3);  // min(k0, N), zero scores included
  CHECK(list.query_id == "q1");
  CHECK(list.source_tag == "bm25");
  CHECK(list.entries[0].doc_id == "d1");
  CHECK(list.entries[1].doc_id == "d2");  // 0-score tie broken by id
  CHECK(list.entries[2].doc_id == "d3");
  CHECK(retrieve_topk(retriever, {"q1", "apple"}, 2).entries.size() == 2);
  CHECK(retriever.pair_score({"q1", "apple"}, "d1") ==
        doctest::Approx(1.1823695104798895).epsilon(1e-9));
}

TEST_CASE("bm25 is insensitive to query token order") {
  const Corpus corpus = fruit_corpus();
  const Bm25Retriever retriever(corpus, InvertedIndex::build(corpus));
  const auto a = retrieve_topk(retriever, {"q1", "apple banana"}, 3);
  const auto b = retrieve_topk(retriever, {"q1", "banana apple"}, 3);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].doc_id == b.entries[i].doc_id);
    CHECK(a.entries[i].score == doctest::Approx(b.entries[i].score).epsilon(1e-12));
  }
}

TEST_CASE("index save/load round trip preserves scores") {
  TempDir tmp;
  const Corpus corpus = fruit_corpus();
  const InvertedIndex index = InvertedIndex::build(corpus);
  index.save(tmp.file("index.json"));
  const InvertedIndex loaded = InvertedIndex::load(tmp.file("index.json"));
  CHECK(loaded.doc_count() == index.doc_count());
  CHECK(loaded.avg_doc_length() == index.avg_doc_length());
  CHECK(loaded.bm25_score({}, {"apple", "banana"}, 0) ==
        index.bm25_score({}, {"apple", "banana"}, 0));
}

TEST_CASE("embedding table lookups and validation") {
  TempDir tmp;
  std::unordered_map<std::string, Vector> vecs;
  vecs["d1"] = Vector{{1.0, 0.0}};
  vecs["q1"] = Vector{{0.6, 0.8}};
  const EmbeddingTable table(2, vecs);
  CHECK(table.dimension() == 2);
  CHECK(table.size() == 2);
  REQUIRE(table.find("q1") != nullptr);
  CHECK(table.find("nope") == nullptr);
  table.save(tmp.file("emb.jsonl"));
  const EmbeddingTable loaded = EmbeddingTable::load(tmp.file("emb.jsonl"));
  CHECK((*loaded.find("q1") - *table.find("q1")).norm() == 0.0);

  testutil::write_file(tmp.file("bad.jsonl"), "{\"_id\": \"x\", \"vector\": [2.0, 0.0]}\n");
  CHECK_THROWS_AS(EmbeddingTable::load(tmp.file("bad.jsonl")), IntegrityError);
}

TEST_CASE("dense retriever is exhaustive exact cosine") {
  Corpus corpus = testutil::corpus_of({{"a", "x"}, {"b", "y"}, {"c", "z"}});
  std::unordered_map<std::string, Vector> vecs;
  vecs["a"] = Vector{{1.0, 0.0}};
  vecs["b"] = Vector{{0.0, 1.0}};
  vecs["c"] = Vector{{std::sqrt(0.5), std::sqrt(0.5)}};
  vecs["q1"] = Vector{{0.6, 0.8}};
  const EmbeddingTable table(2, vecs);
  const DenseRetriever retriever(corpus, table);
  CHECK(retriever.tag() == "dense-cosine");
  const RankedList list = retrieve_topk(retriever, {"q1", "whatever"}, 10);
  REQUIRE(list.entries.size() == 3);
  CHECK(list.entries[0].doc_id == "c");  // 0.6*.707+0.8*.707 = 0.9899
  CHECK(list.entries[1].doc_id == "b");
  CHECK(list.entries[2].doc_id == "a");
  CHECK(retriever.pair_score({"q1", ""}, "a") == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(retriever.pair_score({"q1", ""}, "b") == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(retrieve_topk(retriever, {"q-unknown", "?"}, 3), IntegrityError);
}

TEST_CASE("dense retriever requires vectors for every corpus doc") {
  Corpus corpus = testutil::corpus_of({{"a", "x"}, {"b", "y"}});
  std::unordered_map<std::string, Vector> vecs;
  vecs["a"] = Vector{{1.0, 0.0}};
  const EmbeddingTable table(2, vecs);
  CHECK_THROWS_AS(DenseRetriever(corpus, table), IntegrityError);
}

TEST_CASE("sparse retriever scores by expansion dot product") {
  TempDir tmp;
  Corpus corpus = testutil::corpus_of({{"a", "x"}, {"b", "y"}});
  std::unordered_map<std::string, SparseExpansionModel::WeightMap> weights;
  weights["a"] = {{"alpha", 2.0}, {"beta", 1.0}};
  weights["b"] = {{"beta", 3.0}, {"gamma", 0.5}};
  weights["q1"] = {{"alpha", 1.0}, {"beta", 2.0}};
  const SparseExpansionModel model(weights);
  const SparseRetriever retriever(corpus, model);
  CHECK(retriever.tag() == "sparse-dot");
  // q.a = 1*2 + 2*1 = 4 ; q.b = 2*3 = 6
  CHECK(retriever.pair_score({"q1", ""}, "a") == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(retriever.pair_score({"q1", ""}, "b") == doctest::Approx(6.0).epsilon(1e-12));
  const RankedList list = retrieve_topk(retriever, {"q1", ""}, 5);
  REQUIRE(list.entries.size() == 2);
  CHECK(list.entries[0].doc_id == "b");
  CHECK_THROWS_AS(retrieve_topk(retriever, {"q-ghost", ""}, 2), IntegrityError);

  model.save(tmp.file("expansion.jsonl"));
  const SparseExpansionModel loaded = SparseExpansionModel::load(tmp.file("expansion.jsonl"));
  CHECK(loaded.size() == 3);
  CHECK(loaded.find("a")->at("alpha") == 2.0);
}

TEST_CASE("sparse expansion rejects negative weights") {
  TempDir tmp;
  testutil::write_file(tmp.file("neg.jsonl"),
                       "{\"_id\": \"x\", \"weights\": {\"t\": -0.5}}\n");
  CHECK_THROWS_AS(SparseExpansionModel::load(tmp.file("neg.jsonl")), IntegrityError);
}
