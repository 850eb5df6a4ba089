#include "softskill/lexicon.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "softskill/error.h"
#include "softskill/log.h"

namespace softskill {

SkillLexicon::AddResult SkillLexicon::add(int cluster_id, std::string raw_text) {
  TokenSequence tokens = normalize(raw_text);
  if (tokens.empty() ||
      std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) {
        return is_reserved_token(t);
      })) {
    return AddResult::kRejected;
  }
  if (by_tokens_.contains(tokens)) return AddResult::kDuplicate;

  const int id = static_cast<int>(phrases_.size());
  by_tokens_.emplace(tokens, id);
  clusters_[cluster_id].push_back(id);
  phrases_.push_back(
      SkillPhrase{id, std::move(raw_text), std::move(tokens), cluster_id});
  return AddResult::kAdded;
}

SkillLexicon parse_lexicon(std::istream& in, const std::string& source_name,
                           LexiconLoadReport* report) {
  SkillLexicon lexicon;
  LexiconLoadReport counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(source_name, line_no,
                       "expected `cluster_id<TAB>phrase`");
    }
    const std::string_view id_field(line.data(), tab);
    int cluster_id = 0;
    auto [ptr, ec] = std::from_chars(id_field.data(),
                                     id_field.data() + id_field.size(),
                                     cluster_id);
    if (ec != std::errc() || ptr != id_field.data() + id_field.size() ||
        id_field.empty()) {
      throw ParseError(source_name, line_no,
                       "cluster id is not an integer: '" +
                           std::string(id_field) + "'");
    }

    std::string phrase = line.substr(tab + 1);
    switch (lexicon.add(cluster_id, phrase)) {
      case SkillLexicon::AddResult::kAdded:
        break;
      case SkillLexicon::AddResult::kDuplicate:
        ++counts.duplicates;
        log_warning(source_name + ":" + std::to_string(line_no) +
                    ": duplicate phrase '" + phrase + "' collapsed");
        break;
      case SkillLexicon::AddResult::kRejected:
        ++counts.rejected;
        log_warning(source_name + ":" + std::to_string(line_no) +
                    ": phrase '" + phrase + "' rejected");
        break;
    }
  }
  if (report != nullptr) *report = counts;
  return lexicon;
}

SkillLexicon load_lexicon(const std::filesystem::path& path,
                          LexiconLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon " + path.string());
  return parse_lexicon(in, path.string(), report);
}

void write_lexicon(std::ostream& out, const SkillLexicon& lexicon) {
  for (const SkillPhrase& p : lexicon.phrases()) {
    out << p.cluster_id << '\t' << p.raw_text << '\n';
  }
}

void save_lexicon(const std::filesystem::path& path,
                  const SkillLexicon& lexicon) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write lexicon " + path.string());
  write_lexicon(out, lexicon);
}

LexiconStats compute_stats(const SkillLexicon& lexicon) {
  LexiconStats stats;
  stats.phrase_count = lexicon.size();
  stats.cluster_count = lexicon.clusters().size();
  for (const SkillPhrase& p : lexicon.phrases()) {
    const std::size_t len = p.tokens.size();
    ++stats.length_histogram[len];
    stats.max_length = std::max(stats.max_length, len);
  }
  if (auto it = stats.length_histogram.find(1);
      it != stats.length_histogram.end()) {
    stats.one_word_count = it->second;
  }
  return stats;
}

void print_stats(std::ostream& out, const LexiconStats& stats) {
  out << "phrase_count: " << stats.phrase_count << '\n'
      << "cluster_count: " << stats.cluster_count << '\n'
      << "one_word_count: " << stats.one_word_count << '\n'
      << "max_length: " << stats.max_length << '\n'
      << "length_histogram:\n";
  for (const auto& [len, count] : stats.length_histogram) {
    out << "  " << len << ": " << count << '\n';
  }
}

}  // namespace softskill
