#include "softskill/matcher.h"

#include <algorithm>

#include "softskill/error.h"

namespace softskill {

MatchIndex::MatchIndex() : accepting_{kNotAccepting} {}

MatchIndex::MatchIndex(const SkillLexicon& lexicon) : MatchIndex() {
  for (const SkillPhrase& phrase : lexicon.phrases()) {
    std::uint32_t node = 0;
    for (const std::string& token : phrase.tokens) {
      auto [it, inserted] = vocab_.try_emplace(
          token, static_cast<std::uint32_t>(vocab_.size()));
      const std::uint64_t key = (std::uint64_t{node} << 32) | it->second;
      auto edge = edges_.find(key);
      if (edge == edges_.end()) {
        const auto next = static_cast<std::uint32_t>(accepting_.size());
        accepting_.push_back(kNotAccepting);
        edge = edges_.emplace(key, next).first;
      }
      node = edge->second;
    }
    accepting_[node] = phrase.id;
  }
}

std::size_t MatchIndex::accepting_state_count() const {
  return static_cast<std::size_t>(std::count_if(
      accepting_.begin(), accepting_.end(),
      [](int id) { return id != kNotAccepting; }));
}

std::uint32_t MatchIndex::token_id(const std::string& token) const {
  auto it = vocab_.find(token);
  return it == vocab_.end() ? kNoToken : it->second;
}

std::uint32_t MatchIndex::child(std::uint32_t node, std::uint32_t token) const {
  auto it = edges_.find((std::uint64_t{node} << 32) | token);
  return it == edges_.end() ? 0 : it->second;
}

std::vector<Match> MatchIndex::find_matches(const TokenSequence& tokens) const {
  std::vector<std::uint32_t> ids(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_reserved_token(tokens[i])) {
      throw InputError("reserved token '" + tokens[i] + "' at position " +
                       std::to_string(i) + " in matcher input");
    }
    ids[i] = token_id(tokens[i]);
  }

  std::vector<Match> matches;
  std::size_t start = 0;
  while (start < ids.size()) {
    std::uint32_t node = 0;
    Match best{kNotAccepting, start, start};
    for (std::size_t pos = start; pos < ids.size(); ++pos) {
      if (ids[pos] == kNoToken) break;
      node = child(node, ids[pos]);
      if (node == 0) break;
      if (accepting_[node] != kNotAccepting) {
        best = Match{accepting_[node], start, pos + 1};
      }
    }
    if (best.skill_id != kNotAccepting) {
      matches.push_back(best);
      start = best.end;
    } else {
      ++start;
    }
  }
  return matches;
}

MatchIndex build_index(const SkillLexicon& lexicon) {
  return MatchIndex(lexicon);
}

std::vector<Match> find_matches(const TokenSequence& tokens,
                                const MatchIndex& index) {
  return index.find_matches(tokens);
}

Snippet extract_snippet(const TokenSequence& tokens, const Match& match,
                        std::size_t window, std::string source_id) {
  if (match.start >= match.end || match.end > tokens.size()) {
    throw InputError("match [" + std::to_string(match.start) + ", " +
                     std::to_string(match.end) + ") out of bounds for " +
                     std::to_string(tokens.size()) + " tokens");
  }
  const auto begin = tokens.begin();
  const std::size_t left_start = match.start > window ? match.start - window : 0;
  const std::size_t right_end = std::min(tokens.size(), match.end + window);

  Snippet snippet;
  snippet.left.assign(begin + left_start, begin + match.start);
  snippet.skill.assign(begin + match.start, begin + match.end);
  snippet.right.assign(begin + match.end, begin + right_end);
  snippet.skill_id = match.skill_id;
  snippet.source_id = std::move(source_id);
  return snippet;
}

}  // namespace softskill
