#ifndef SOFTSKILL_LEXICON_H_
#define SOFTSKILL_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "softskill/preprocess.h"

namespace softskill {

struct SkillPhrase {
  int id = 0;
  std::string raw_text;
  TokenSequence tokens;  // normalized
  int cluster_id = 0;

  bool operator==(const SkillPhrase&) const = default;
};

struct LexiconLoadReport {
  std::size_t duplicates = 0;  // collapsed onto an earlier phrase
  std::size_t rejected = 0;    // empty after normalization or reserved tokens
};

// Soft-skill phrases grouped into clusters. Phrase ids are dense and follow
// insertion order; no two phrases share a normalized token sequence.
class SkillLexicon {
 public:
  enum class AddResult { kAdded, kDuplicate, kRejected };

  // Normalizes raw_text and appends it unless it collides with an existing
  // phrase or normalizes to nothing usable.
  AddResult add(int cluster_id, std::string raw_text);

  const std::vector<SkillPhrase>& phrases() const { return phrases_; }
  const std::map<int, std::vector<int>>& clusters() const { return clusters_; }
  const SkillPhrase& phrase(int id) const { return phrases_.at(id); }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }

  bool operator==(const SkillLexicon&) const = default;

 private:
  std::vector<SkillPhrase> phrases_;
  std::map<int, std::vector<int>> clusters_;
  std::map<TokenSequence, int> by_tokens_;
};

struct LexiconStats {
  std::size_t phrase_count = 0;
  std::size_t cluster_count = 0;
  std::map<std::size_t, std::size_t> length_histogram;
  std::size_t one_word_count = 0;
  std::size_t max_length = 0;

  bool operator==(const LexiconStats&) const = default;
};

// Reads `cluster_id <TAB> phrase` lines. Blank lines are skipped.
// Throws ParseError (with the line number) on malformed lines; warns and
// counts phrases that are rejected or collapse as duplicates.
SkillLexicon parse_lexicon(std::istream& in, const std::string& source_name,
                           LexiconLoadReport* report = nullptr);
SkillLexicon load_lexicon(const std::filesystem::path& path,
                          LexiconLoadReport* report = nullptr);

void write_lexicon(std::ostream& out, const SkillLexicon& lexicon);
void save_lexicon(const std::filesystem::path& path,
                  const SkillLexicon& lexicon);

LexiconStats compute_stats(const SkillLexicon& lexicon);

// `key: value` lines followed by the histogram.
void print_stats(std::ostream& out, const LexiconStats& stats);

}  // namespace softskill

#endif  // SOFTSKILL_LEXICON_H_
