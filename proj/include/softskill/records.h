#ifndef SOFTSKILL_RECORDS_H_
#define SOFTSKILL_RECORDS_H_

// Line-delimited JSON records exchanged between pipeline stages.
//
//   snippet:     {"source_id", "skill_id", "skill_text", "left", "right"
//                 [, "label"]}
//   input:       {"tokens", "mode" [, "skill_vector"] [, "label"]
//                 [, "source_id", "skill_id"]}
//   annotation:  {"source_id", "skill_id", "votes_positive", "votes_negative"}
//
// Output files start with one {"meta": {...}} line carrying the command,
// seed and config hash; readers skip it.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "softskill/augment.h"
#include "softskill/embed.h"
#include "softskill/represent.h"

namespace softskill {

nlohmann::json snippet_to_json(const Snippet& snippet,
                               std::optional<Label> label = std::nullopt);
Snippet snippet_from_json(const nlohmann::json& record,
                          std::optional<Label>* label = nullptr);

nlohmann::json input_to_json(const RepresentedInput& input);
RepresentedInput input_from_json(const nlohmann::json& record);

AnnotationRecord annotation_from_json(const nlohmann::json& record);

class JsonlWriter {
 public:
  // Writes the meta line immediately when `meta` is an object.
  JsonlWriter(const std::filesystem::path& path, const nlohmann::json& meta);

  void write(const nlohmann::json& record);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Calls visit(record, line_number) for every non-meta, non-blank line.
// Throws ParseError on malformed JSON.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const nlohmann::json&, std::size_t)>& visit);

std::vector<Snippet> read_snippets(const std::filesystem::path& path,
                                   std::vector<std::optional<Label>>* labels = nullptr);
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);

// Accepts input records as they are and represents snippet records in
// `mode` (which needs `embeddings` for masked-embed).
std::vector<RepresentedInput> read_inputs(const std::filesystem::path& path,
                                          RepresentationMode mode,
                                          const EmbeddingTable* embeddings);

}  // namespace softskill

#endif  // SOFTSKILL_RECORDS_H_
