#ifndef SOFTSKILL_PREPROCESS_H_
#define SOFTSKILL_PREPROCESS_H_

#include <string>
#include <string_view>
#include <vector>

namespace softskill {

// Lowercase tokens; none empty, none containing whitespace, and the only
// punctuation-only token is ",".
using TokenSequence = std::vector<std::string>;

inline constexpr std::string_view kMaskToken = "xxx";
inline constexpr std::string_view kBeginTag = "<begin>";
inline constexpr std::string_view kEndTag = "<end>";
inline constexpr std::string_view kCommaToken = ",";

// True for the mask and tag literals, which only the representation
// stage may introduce.
bool is_reserved_token(std::string_view token);

// Splits on whitespace, strips leading/trailing punctuation from each
// fragment, turns commas into standalone "," tokens, drops
// punctuation-only fragments and case-folds ASCII letters. Hyphenated
// words stay single tokens.
TokenSequence tokenize(std::string_view text);

// Rule-based plural reduction:
//   -ies -> -y, -sses/-zzes/-xes/-ches/-shes -> drop "es", other -s -> drop "s"
// Words ending in -ss, -us, -is, short words and a table of irregulars
// (is, this, its, ...) are returned unchanged.
std::string lemmatize(std::string_view token);

// tokenize() followed by lemmatize() on every token.
TokenSequence normalize(std::string_view text);

std::string join_tokens(const TokenSequence& tokens, std::string_view sep = " ");

}  // namespace softskill

#endif  // SOFTSKILL_PREPROCESS_H_
