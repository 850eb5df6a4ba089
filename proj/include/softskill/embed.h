#ifndef SOFTSKILL_EMBED_H_
#define SOFTSKILL_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "softskill/preprocess.h"
#include "softskill/rng.h"

namespace softskill {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Word vectors read from a text file, plus an unknown-word vector and one
// vector for each reserved token. The extra vectors are drawn uniformly
// from [-0.25, 0.25] with the table's seed in the fixed order
// unk, xxx, <begin>, <end>.
class EmbeddingTable {
 public:
  static constexpr double kInitRange = 0.25;
  static constexpr std::size_t kReservedCount = 4;  // unk + 3 reserved tokens

  EmbeddingTable(std::size_t dim, std::uint64_t seed = kDefaultSeed);

  // Returns false (and keeps the first vector) if the word already exists.
  bool add(std::string word, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }  // file words only
  const std::vector<std::string>& words() const { return words_; }

  // In-vocabulary means a file word or a reserved token.
  bool contains(std::string_view token) const;
  // Falls back to the unknown-word vector.
  std::span<const double> lookup(std::string_view token) const;
  std::span<const double> unk_vector() const { return row(0); }

 private:
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  std::size_t dim_;
  std::vector<std::string> words_;
  StringMap<std::size_t> index_;  // token -> row; rows 0..3 are unk/reserved
  std::vector<double> data_;
};

// Text format, one `word v1 ... vdim` line per word. A leading
// `<count> <dim>` header line (word2vec style) is skipped. Throws
// ParseError naming the line on a dimension mismatch or bad number.
EmbeddingTable parse_embeddings(std::istream& in, const std::string& source_name,
                                std::size_t expected_dim,
                                std::uint64_t seed = kDefaultSeed);
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t expected_dim,
                               std::uint64_t seed = kDefaultSeed);

struct MeanEmbedding {
  std::vector<double> values;
  bool all_oov = false;
};

// Componentwise mean of the token vectors (unk for OOV). If every token is
// OOV the result is the zero vector with all_oov set. Throws InputError on
// an empty sequence.
MeanEmbedding mean_embedding(const TokenSequence& tokens,
                             const EmbeddingTable& table);

}  // namespace softskill

#endif  // SOFTSKILL_EMBED_H_
