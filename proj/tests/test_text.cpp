#include <doctest.h>

#include "ranklab/text.hpp"

using namespace ranklab;

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("a  b\tc\nd") == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tokenize("foo-bar_baz") == std::vector<std::string>{"foo", "bar", "baz"});
}

TEST_CASE("tokenize keeps digits and mixed alphanumerics") {
  CHECK(tokenize("top 100 documents") == std::vector<std::string>{"top", "100", "documents"});
  CHECK(tokenize("bm25 k1=1.2") == std::vector<std::string>{"bm25", "k1", "1", "2"});
}

TEST_CASE("tokenize handles empty and all-punctuation input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ... !!! ").empty());
}

TEST_CASE("tokenize folds case beyond ASCII") {
  // Latin-1 and Latin Extended-A cover the Polish alphabet.
  CHECK(tokenize("Żółć") == tokenize("żółć"));
  CHECK(tokenize("ŁÓDŹ") == tokenize("łódź"));
  CHECK(tokenize("Łódź").size() == 1);
}

TEST_CASE("tokenize_fields concatenates title before text") {
  const auto tokens = tokenize_fields("My Title", "body text");
  CHECK(tokens == std::vector<std::string>{"my", "title", "body", "text"});
  CHECK(tokenize_fields("", "only body") == std::vector<std::string>{"only", "body"});
}
