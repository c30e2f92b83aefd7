#include "ranklab/run_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ranklab/types.hpp"

namespace ranklab {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void save_run(const std::vector<RankedList>& run, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const auto& list : run) {
    std::size_t rank = 1;
    for (const auto& entry : list.entries) {
      out << list.query_id << " Q0 " << entry.doc_id << ' ' << rank << ' '
          << format_double(entry.score) << ' ' << list.source_tag << '\n';
      ++rank;
    }
  }
}

std::vector<RankedList> load_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<RankedList> run;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string query_id, q0, doc_id, rank_text, score_text, tag;
    if (!(row >> query_id >> q0 >> doc_id >> rank_text >> score_text >> tag) || q0 != "Q0") {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed run line");
    }
    double score = 0.0;
    const auto* begin = score_text.data();
    const auto* end = begin + score_text.size();
    const auto res = std::from_chars(begin, end, score);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad score '" +
                       score_text + "'");
    }
    if (run.empty() || run.back().query_id != query_id) {
      run.push_back({query_id, {}, tag});
    }
    run.back().entries.push_back({doc_id, score});
  }
  return run;
}

}  // namespace ranklab
