#ifndef SOFTSKILL_AUGMENT_H_
#define SOFTSKILL_AUGMENT_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "softskill/label.h"
#include "softskill/matcher.h"

namespace softskill {

// Crowd votes for one annotated snippet.
struct AnnotationRecord {
  std::string source_id;
  int skill_id = 0;
  std::size_t votes_positive = 0;
  std::size_t votes_negative = 0;
};

struct SeedSkills {
  std::vector<int> negative;  // sorted
  std::vector<int> positive;  // sorted
};

inline constexpr double kDefaultNegativeRatio = 0.7;

// Votes are pooled per skill. Negative seeds: non-candidate vote fraction
// strictly above neg_ratio. Positive seeds: no non-candidate votes at all.
// Throws InputError on a record without votes.
SeedSkills select_seed_skills(std::span<const AnnotationRecord> annotations,
                              double neg_ratio = kDefaultNegativeRatio);

struct LabeledSnippet {
  Snippet snippet;
  Label label = Label::kNegative;
};

std::vector<std::string> default_exclusion_phrases();

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

// Keeps, in input order, snippets of the seed skills and labels them with
// `polarity`. For negative mining a snippet is dropped when its left or
// right context contains any exclusion phrase (normalized, matched as
// consecutive tokens). Stops after `limit` snippets.
std::vector<LabeledSnippet> mine_weak_labels(
    std::span<const Snippet> snippets, std::span<const int> seed_skills,
    Label polarity,
    const std::vector<std::string>& exclusion_phrases = default_exclusion_phrases(),
    std::size_t limit = kNoLimit);

// True if `phrase` occurs as a contiguous run inside `tokens`.
bool contains_phrase(const TokenSequence& tokens, const TokenSequence& phrase);

}  // namespace softskill

#endif  // SOFTSKILL_AUGMENT_H_
