#include "softskill/represent.h"

#include "softskill/error.h"
#include "softskill/log.h"

namespace softskill {

std::string_view to_string(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Label parse_label(std::string_view text) {
  if (text == "positive" || text == "1") return Label::kPositive;
  if (text == "negative" || text == "0") return Label::kNegative;
  throw InputError("unknown label '" + std::string(text) + "'");
}

std::string_view to_string(RepresentationMode mode) {
  switch (mode) {
    case RepresentationMode::kUnmodified:
      return "unmodified";
    case RepresentationMode::kMasked:
      return "masked";
    case RepresentationMode::kMaskedWithEmbedding:
      return "masked-embed";
    case RepresentationMode::kTagged:
      return "tagged";
  }
  return "unknown";
}

RepresentationMode parse_mode(std::string_view text) {
  for (auto mode : {RepresentationMode::kUnmodified, RepresentationMode::kMasked,
                    RepresentationMode::kMaskedWithEmbedding,
                    RepresentationMode::kTagged}) {
    if (text == to_string(mode)) return mode;
  }
  throw ConfigError("unknown representation mode '" + std::string(text) +
                    "' (expected unmodified|masked|masked-embed|tagged)");
}

RepresentedInput represent(const Snippet& snippet, RepresentationMode mode,
                           const EmbeddingTable* embeddings) {
  if (mode == RepresentationMode::kMaskedWithEmbedding && embeddings == nullptr) {
    throw ConfigError("masked-embed representation requires embeddings");
  }

  RepresentedInput out;
  out.mode = mode;
  out.skill_id = snippet.skill_id;
  out.source_id = snippet.source_id;

  TokenSequence& t = out.tokens;
  t.reserve(snippet.left.size() + snippet.skill.size() + snippet.right.size() + 2);
  t.insert(t.end(), snippet.left.begin(), snippet.left.end());
  switch (mode) {
    case RepresentationMode::kUnmodified:
      t.insert(t.end(), snippet.skill.begin(), snippet.skill.end());
      break;
    case RepresentationMode::kMasked:
    case RepresentationMode::kMaskedWithEmbedding:
      t.insert(t.end(), snippet.skill.size(), std::string(kMaskToken));
      break;
    case RepresentationMode::kTagged:
      t.emplace_back(kBeginTag);
      t.insert(t.end(), snippet.skill.begin(), snippet.skill.end());
      t.emplace_back(kEndTag);
      break;
  }
  t.insert(t.end(), snippet.right.begin(), snippet.right.end());

  if (mode == RepresentationMode::kMaskedWithEmbedding) {
    MeanEmbedding mean = mean_embedding(snippet.skill, *embeddings);
    if (mean.all_oov) {
      log_warning("skill '" + join_tokens(snippet.skill) +
                  "' has no known words; using a zero skill vector");
    }
    out.skill_vector = std::move(mean.values);
  }
  return out;
}

}  // namespace softskill
