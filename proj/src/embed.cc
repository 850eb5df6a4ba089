#include "softskill/embed.h"

#include <charconv>
#include <fstream>
#include <istream>

#include "softskill/error.h"

namespace softskill {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_size(std::string_view s, std::size_t* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, std::uint64_t seed)
    : dim_(dim), data_(kReservedCount * dim) {
  Rng rng(seed);
  for (double& v : data_) v = rng.uniform(-kInitRange, kInitRange);
  index_.emplace(std::string(kMaskToken), 1);
  index_.emplace(std::string(kBeginTag), 2);
  index_.emplace(std::string(kEndTag), 3);
}

bool EmbeddingTable::add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw InputError("embedding for '" + word + "' has " +
                     std::to_string(vector.size()) + " values, expected " +
                     std::to_string(dim_));
  }
  const std::size_t row_index = kReservedCount + words_.size();
  if (!index_.try_emplace(word, row_index).second) return false;
  data_.insert(data_.end(), vector.begin(), vector.end());
  words_.push_back(std::move(word));
  return true;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::span<const double> EmbeddingTable::lookup(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_vector() : row(it->second);
}

EmbeddingTable parse_embeddings(std::istream& in, const std::string& source_name,
                                std::size_t expected_dim, std::uint64_t seed) {
  if (expected_dim == 0) throw ConfigError("embedding dimension must be positive");
  EmbeddingTable table(expected_dim, seed);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values(expected_dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) continue;

    std::size_t a = 0, b = 0;
    if (line_no == 1 && fields.size() == 2 && parse_size(fields[0], &a) &&
        parse_size(fields[1], &b)) {
      if (b != expected_dim) {
        throw ParseError(source_name, line_no,
                         "header declares dimension " + std::to_string(b) +
                             ", expected " + std::to_string(expected_dim));
      }
      continue;
    }
    if (fields.size() != expected_dim + 1) {
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(expected_dim) +
                           " values, found " +
                           std::to_string(fields.size() - 1));
    }
    for (std::size_t k = 0; k < expected_dim; ++k) {
      if (!parse_double(fields[k + 1], &values[k])) {
        throw ParseError(source_name, line_no,
                         "bad number '" + std::string(fields[k + 1]) + "'");
      }
    }
    table.add(std::string(fields[0]), values);
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t expected_dim, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embeddings " + path.string());
  return parse_embeddings(in, path.string(), expected_dim, seed);
}

MeanEmbedding mean_embedding(const TokenSequence& tokens,
                             const EmbeddingTable& table) {
  if (tokens.empty()) throw InputError("mean_embedding of an empty sequence");
  MeanEmbedding result{std::vector<double>(table.dim(), 0.0), true};
  for (const std::string& token : tokens) {
    if (table.contains(token)) result.all_oov = false;
  }
  if (result.all_oov) return result;

  for (const std::string& token : tokens) {
    const auto v = table.lookup(token);
    for (std::size_t k = 0; k < v.size(); ++k) result.values[k] += v[k];
  }
  const double n = static_cast<double>(tokens.size());
  for (double& x : result.values) x /= n;
  return result;
}

}  // namespace softskill
