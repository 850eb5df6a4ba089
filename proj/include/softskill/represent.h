#ifndef SOFTSKILL_REPRESENT_H_
#define SOFTSKILL_REPRESENT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softskill/embed.h"
#include "softskill/label.h"
#include "softskill/matcher.h"

namespace softskill {

enum class RepresentationMode { kUnmodified, kMasked, kMaskedWithEmbedding, kTagged };

// "unmodified", "masked", "masked-embed", "tagged"
std::string_view to_string(RepresentationMode mode);
RepresentationMode parse_mode(std::string_view text);  // throws ConfigError

struct RepresentedInput {
  TokenSequence tokens;
  std::optional<std::vector<double>> skill_vector;  // masked-embed only
  RepresentationMode mode = RepresentationMode::kUnmodified;
  std::optional<Label> label;
  std::string source_id;
  int skill_id = -1;

  bool operator==(const RepresentedInput&) const = default;
};

// Unmodified: left ++ skill ++ right
// Masked:     left ++ xxx (one per skill token) ++ right
// Tagged:     left ++ <begin> ++ skill ++ <end> ++ right
// MaskedWithEmbedding is Masked plus skill_vector = mean_embedding(skill);
// it requires `embeddings` and throws ConfigError without them.
RepresentedInput represent(const Snippet& snippet, RepresentationMode mode,
                           const EmbeddingTable* embeddings = nullptr);

}  // namespace softskill

#endif  // SOFTSKILL_REPRESENT_H_
