#include "softskill/augment.h"

#include <algorithm>
#include <map>

#include "softskill/error.h"

namespace softskill {

SeedSkills select_seed_skills(std::span<const AnnotationRecord> annotations,
                              double neg_ratio) {
  struct Votes {
    std::size_t pos = 0;
    std::size_t neg = 0;
  };
  std::map<int, Votes> pooled;
  for (const AnnotationRecord& a : annotations) {
    if (a.votes_positive + a.votes_negative == 0) {
      throw InputError("annotation for skill " + std::to_string(a.skill_id) +
                       " (" + a.source_id + ") has no votes");
    }
    pooled[a.skill_id].pos += a.votes_positive;
    pooled[a.skill_id].neg += a.votes_negative;
  }

  SeedSkills seeds;
  for (const auto& [skill, v] : pooled) {
    const double neg_fraction =
        static_cast<double>(v.neg) / static_cast<double>(v.pos + v.neg);
    if (neg_fraction > neg_ratio) seeds.negative.push_back(skill);
    if (v.neg == 0) seeds.positive.push_back(skill);
  }
  return seeds;
}

std::vector<std::string> default_exclusion_phrases() {
  return {"candidate", "individual", "looking for"};
}

bool contains_phrase(const TokenSequence& tokens, const TokenSequence& phrase) {
  if (phrase.empty()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) !=
         tokens.end();
}

std::vector<LabeledSnippet> mine_weak_labels(
    std::span<const Snippet> snippets, std::span<const int> seed_skills,
    Label polarity, const std::vector<std::string>& exclusion_phrases,
    std::size_t limit) {
  std::vector<int> seeds(seed_skills.begin(), seed_skills.end());
  std::sort(seeds.begin(), seeds.end());

  std::vector<TokenSequence> exclusions;
  if (polarity == Label::kNegative) {
    for (const std::string& phrase : exclusion_phrases) {
      TokenSequence tokens = normalize(phrase);
      if (!tokens.empty()) exclusions.push_back(std::move(tokens));
    }
  }

  std::vector<LabeledSnippet> out;
  for (const Snippet& s : snippets) {
    if (out.size() >= limit) break;
    if (!std::binary_search(seeds.begin(), seeds.end(), s.skill_id)) continue;
    const bool excluded = std::any_of(
        exclusions.begin(), exclusions.end(), [&](const TokenSequence& phrase) {
          return contains_phrase(s.left, phrase) || contains_phrase(s.right, phrase);
        });
    if (excluded) continue;
    out.push_back(LabeledSnippet{s, polarity});
  }
  return out;
}

}  // namespace softskill
