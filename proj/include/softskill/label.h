#ifndef SOFTSKILL_LABEL_H_
#define SOFTSKILL_LABEL_H_

#include <string_view>

namespace softskill {

// Positive: the phrase describes the job candidate.
enum class Label { kNegative = 0, kPositive = 1 };

std::string_view to_string(Label label);
// Accepts "positive"/"negative" (also "1"/"0"). Throws InputError.
Label parse_label(std::string_view text);

}  // namespace softskill

#endif  // SOFTSKILL_LABEL_H_
