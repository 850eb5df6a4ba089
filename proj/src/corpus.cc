#include "softskill/corpus.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>

#include "softskill/error.h"

namespace softskill {
namespace {

constexpr std::array<std::string_view, 12> kBullets = {
    "\xE2\x80\xA2",  // •
    "\xE2\x97\x8F",  // ●
    "\xE2\x96\xAA",  // ▪
    "\xE2\x97\xA6",  // ◦
    "\xE2\x80\xA3",  // ‣
    "\xC2\xB7",      // ·
    "\xE2\x96\xA0",  // ■
    "\xE2\x9E\xA2",  // ➢
    "\xE2\x9C\x93",  // ✓
    "\xE2\x9C\x94",  // ✔
    "\xE2\x98\x85",  // ★
    "*",
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Length of the delimiter starting at doc[i], or 0.
std::size_t delimiter_at(std::string_view doc, std::size_t i) {
  const char c = doc[i];
  if (c == '!' || c == '?' || c == '\n' || c == '\r') return 1;
  if (c == '.') {
    const bool numeric = i > 0 && i + 1 < doc.size() && is_digit(doc[i - 1]) &&
                         is_digit(doc[i + 1]);
    return numeric ? 0 : 1;
  }
  if (c == '-' || c == '+') {
    const bool before = i == 0 || is_space(doc[i - 1]);
    const bool after = i + 1 == doc.size() || is_space(doc[i + 1]);
    return before && after ? 1 : 0;
  }
  for (std::string_view b : kBullets) {
    if (doc.substr(i).starts_with(b)) return b.size();
  }
  return 0;
}

}  // namespace

std::vector<std::string> split_units(std::string_view document) {
  std::vector<std::string> units;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    const std::string_view unit = trim(document.substr(start, end - start));
    if (!unit.empty()) units.emplace_back(unit);
  };
  while (i < document.size()) {
    const std::size_t len = delimiter_at(document, i);
    if (len == 0) {
      ++i;
      continue;
    }
    flush(i);
    i += len;
    start = i;
  }
  flush(document.size());
  return units;
}

bool read_delimited_record(std::istream& in, char delimiter,
                           std::vector<std::string>* fields) {
  fields->clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == delimiter) {
      fields->push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields->push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields->push_back(std::move(field));
  return true;
}

void for_each_unit(const std::filesystem::path& path, const CorpusOptions& options,
                   const std::function<void(CorpusUnit&&)>& visit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus " + path.string());

  auto emit_document = [&](std::size_t doc, std::string_view text) {
    std::size_t index = 0;
    for (std::string& unit : split_units(text)) {
      visit(CorpusUnit{std::to_string(doc) + ":" + std::to_string(index++),
                       std::move(unit)});
    }
  };

  if (options.text_column.empty()) {
    std::string line;
    for (std::size_t doc = 0; std::getline(in, line); ++doc) emit_document(doc, line);
    return;
  }

  const char delimiter = options.delimiter != 0 ? options.delimiter
                         : path.extension() == ".tsv" ? '\t'
                                                      : ',';
  std::vector<std::string> fields;
  if (!read_delimited_record(in, delimiter, &fields)) return;
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  const auto column = std::find(fields.begin(), fields.end(), options.text_column);
  if (column == fields.end()) {
    throw InputError("corpus " + path.string() + " has no column '" +
                     options.text_column + "'");
  }
  const auto col = static_cast<std::size_t>(column - fields.begin());
  for (std::size_t doc = 0; read_delimited_record(in, delimiter, &fields); ++doc) {
    if (col < fields.size()) emit_document(doc, fields[col]);
  }
}

std::vector<CorpusUnit> ingest_corpus(const std::filesystem::path& path,
                                      const CorpusOptions& options) {
  std::vector<CorpusUnit> units;
  for_each_unit(path, options, [&](CorpusUnit&& u) { units.push_back(std::move(u)); });
  return units;
}

}  // namespace softskill
