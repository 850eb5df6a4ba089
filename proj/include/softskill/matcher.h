#ifndef SOFTSKILL_MATCHER_H_
#define SOFTSKILL_MATCHER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "softskill/lexicon.h"
#include "softskill/preprocess.h"

namespace softskill {

inline constexpr std::size_t kDefaultWindow = 10;

// A phrase occurrence covering tokens [start, end).
struct Match {
  int skill_id = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Match&) const = default;
};

// A matched phrase with up to `window` tokens of context on either side.
struct Snippet {
  TokenSequence left;
  TokenSequence skill;
  TokenSequence right;
  int skill_id = 0;
  std::string source_id;

  bool operator==(const Snippet&) const = default;
};

// Token trie over the normalized lexicon phrases. Immutable once built.
class MatchIndex {
 public:
  MatchIndex();
  explicit MatchIndex(const SkillLexicon& lexicon);

  // Leftmost-longest, non-overlapping matches in increasing start order.
  // Throws InputError if `tokens` contains a reserved token.
  std::vector<Match> find_matches(const TokenSequence& tokens) const;

  std::size_t node_count() const { return accepting_.size(); }
  std::size_t accepting_state_count() const;

 private:
  static constexpr std::uint32_t kNoToken = UINT32_MAX;
  static constexpr int kNotAccepting = -1;

  std::uint32_t token_id(const std::string& token) const;
  std::uint32_t child(std::uint32_t node, std::uint32_t token) const;

  std::unordered_map<std::string, std::uint32_t> vocab_;
  // (node << 32 | token) -> child node
  std::unordered_map<std::uint64_t, std::uint32_t> edges_;
  std::vector<int> accepting_;  // phrase id per node
};

MatchIndex build_index(const SkillLexicon& lexicon);

std::vector<Match> find_matches(const TokenSequence& tokens,
                                const MatchIndex& index);

// left = tokens[max(0, start-window), start), right = tokens[end,
// min(n, end+window)). Throws InputError if the match is out of bounds.
Snippet extract_snippet(const TokenSequence& tokens, const Match& match,
                        std::size_t window = kDefaultWindow,
                        std::string source_id = {});

}  // namespace softskill

#endif  // SOFTSKILL_MATCHER_H_
