#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ranklab {

// Lowercasing word tokenizer: splits on anything that is not ASCII
// alphanumeric or a non-ASCII codepoint. Case folding covers ASCII,
// Latin-1 supplement and Latin Extended-A, which is enough for the
// European-language corpora this toolkit targets. No stemming, no stopwords.
std::vector<std::string> tokenize(std::string_view text);

// Tokens of a document: title tokens followed by text tokens.
std::vector<std::string> tokenize_fields(std::string_view title, std::string_view text);

}  // namespace ranklab
