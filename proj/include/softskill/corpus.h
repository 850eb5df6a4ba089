#ifndef SOFTSKILL_CORPUS_H_
#define SOFTSKILL_CORPUS_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace softskill {

// A sentence-like piece of a document; source_id is "<doc>:<index>", both
// 0-based, where doc is the line (plain text) or data row (table).
struct CorpusUnit {
  std::string source_id;
  std::string text;

  bool operator==(const CorpusUnit&) const = default;
};

struct CorpusOptions {
  // Empty: plain text, one document per line. Otherwise the input is a
  // delimited table with a header row and this names the text column.
  std::string text_column;
  // 0 picks tab for .tsv files and comma otherwise.
  char delimiter = 0;
};

// Splits on '.', '!', '?', newlines and list bullets (•, ●, ▪, ◦, ‣, ·,
// ■, *, and standalone '-' or '+'). A '.' between two digits does not
// split. Units are trimmed; empty ones are dropped.
std::vector<std::string> split_units(std::string_view document);

// RFC 4180-style reader: quoted fields may hold delimiters, doubled
// quotes and newlines. Returns false at end of input.
bool read_delimited_record(std::istream& in, char delimiter,
                           std::vector<std::string>* fields);

// Streams units in document order. Throws InputError if the file cannot be
// read or the text column is missing.
void for_each_unit(const std::filesystem::path& path, const CorpusOptions& options,
                   const std::function<void(CorpusUnit&&)>& visit);

std::vector<CorpusUnit> ingest_corpus(const std::filesystem::path& path,
                                      const CorpusOptions& options = {});

}  // namespace softskill

#endif  // SOFTSKILL_CORPUS_H_
