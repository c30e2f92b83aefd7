#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ranklab/retrieval.hpp"

namespace ranklab {

// Shortest round-trip decimal form of a double; the one float format used in
// text artifacts so identical values always serialize identically.
std::string format_double(double value);

// TREC run format: "query_id Q0 doc_id rank score tag", rank starting at 1.
void save_run(const std::vector<RankedList>& run, const std::filesystem::path& path);
std::vector<RankedList> load_run(const std::filesystem::path& path);

}  // namespace ranklab
