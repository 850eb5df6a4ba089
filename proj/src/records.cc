#include "softskill/records.h"

#include "softskill/error.h"

namespace softskill {
namespace {

using nlohmann::json;

TokenSequence split_spaces(const std::string& text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

template <typename T>
T field(const json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end()) {
    throw InputError(std::string("record is missing field '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + name + "' has the wrong type");
  }
}

std::optional<Label> optional_label(const json& record) {
  auto it = record.find("label");
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (it->is_number_integer()) return parse_label(std::to_string(it->get<int>()));
  if (it->is_string()) return parse_label(it->get<std::string>());
  throw InputError("field 'label' has the wrong type");
}

}  // namespace

json snippet_to_json(const Snippet& snippet, std::optional<Label> label) {
  json j;
  j["source_id"] = snippet.source_id;
  j["skill_id"] = snippet.skill_id;
  j["skill_text"] = join_tokens(snippet.skill);
  j["left"] = snippet.left;
  j["right"] = snippet.right;
  if (label) j["label"] = std::string(to_string(*label));
  return j;
}

Snippet snippet_from_json(const json& record, std::optional<Label>* label) {
  Snippet s;
  s.source_id = record.contains("source_id") ? field<std::string>(record, "source_id") : "";
  s.skill_id = field<int>(record, "skill_id");
  s.skill = split_spaces(field<std::string>(record, "skill_text"));
  s.left = field<TokenSequence>(record, "left");
  s.right = field<TokenSequence>(record, "right");
  if (s.skill.empty()) throw InputError("snippet has an empty skill_text");
  if (label != nullptr) *label = optional_label(record);
  return s;
}

json input_to_json(const RepresentedInput& input) {
  json j;
  j["tokens"] = input.tokens;
  j["mode"] = std::string(to_string(input.mode));
  if (input.skill_vector) j["skill_vector"] = *input.skill_vector;
  if (input.label) j["label"] = std::string(to_string(*input.label));
  if (!input.source_id.empty()) j["source_id"] = input.source_id;
  if (input.skill_id >= 0) j["skill_id"] = input.skill_id;
  return j;
}

RepresentedInput input_from_json(const json& record) {
  RepresentedInput in;
  in.tokens = field<TokenSequence>(record, "tokens");
  try {
    in.mode = parse_mode(field<std::string>(record, "mode"));
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
  if (record.contains("skill_vector")) {
    in.skill_vector = field<std::vector<double>>(record, "skill_vector");
  }
  in.label = optional_label(record);
  if (record.contains("source_id")) in.source_id = field<std::string>(record, "source_id");
  if (record.contains("skill_id")) in.skill_id = field<int>(record, "skill_id");
  return in;
}

AnnotationRecord annotation_from_json(const json& record) {
  AnnotationRecord a;
  a.source_id = record.contains("source_id") ? field<std::string>(record, "source_id") : "";
  a.skill_id = field<int>(record, "skill_id");
  a.votes_positive = field<std::size_t>(record, "votes_positive");
  a.votes_negative = field<std::size_t>(record, "votes_negative");
  return a;
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path, const json& meta)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw InputError("cannot write " + path.string());
  if (meta.is_object()) write(json{{"meta", meta}});
}

void JsonlWriter::write(const json& record) {
  out_ << record.dump() << '\n';
  if (!out_) throw InputError("failed writing " + path_.string());
}

void JsonlWriter::close() {
  out_.close();
  if (!out_) throw InputError("failed closing " + path_.string());
}

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const json&, std::size_t)>& visit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    if (!record.is_object()) throw ParseError(path.string(), line_no, "expected a JSON object");
    if (record.contains("meta")) continue;
    try {
      visit(record, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
}

std::vector<Snippet> read_snippets(const std::filesystem::path& path,
                                   std::vector<std::optional<Label>>* labels) {
  std::vector<Snippet> out;
  read_jsonl(path, [&](const json& record, std::size_t) {
    std::optional<Label> label;
    out.push_back(snippet_from_json(record, &label));
    if (labels != nullptr) labels->push_back(label);
  });
  return out;
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  std::vector<AnnotationRecord> out;
  read_jsonl(path, [&](const json& record, std::size_t) {
    out.push_back(annotation_from_json(record));
  });
  return out;
}

std::vector<RepresentedInput> read_inputs(const std::filesystem::path& path,
                                          RepresentationMode mode,
                                          const EmbeddingTable* embeddings) {
  std::vector<RepresentedInput> out;
  read_jsonl(path, [&](const json& record, std::size_t) {
    if (record.contains("tokens")) {
      out.push_back(input_from_json(record));
      return;
    }
    std::optional<Label> label;
    const Snippet snippet = snippet_from_json(record, &label);
    RepresentedInput in = represent(snippet, mode, embeddings);
    in.label = label;
    out.push_back(std::move(in));
  });
  return out;
}

}  // namespace softskill
