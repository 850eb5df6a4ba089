#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "softskill/error.h"
#include "softskill/model.h"

namespace softskill {
namespace {

constexpr char kMagic[8] = {'S', 'S', 'K', 'L', 'C', 'K', 'P', 'T'};
constexpr char kTrailer[4] = {'E', 'N', 'D', '.'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void raw(const void* data, std::size_t n) {
    out_.append(static_cast<const char*>(data), n);
  }
  template <typename T>
  void uint(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
  }
  void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }
  void str32(std::string_view s) {
    uint(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : in_(bytes) {}

  std::string_view take(std::size_t n) {
    if (n > in_.size() - pos_) throw CheckpointError("checkpoint is truncated");
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  template <typename T>
  T uint() {
    const std::string_view s = take(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(s[i])) << (8 * i);
    }
    return value;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::string str32() { return std::string(take(uint<std::uint32_t>())); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

nlohmann::json header_json(const ClassifierModel& model) {
  const TrainConfig& c = model.config();
  nlohmann::json h;
  h["format_version"] = kFormatVersion;
  h["model_kind"] = std::string(to_string(c.model_kind));
  h["mode"] = std::string(to_string(c.mode));
  h["embedding_dim"] = c.embedding_dim;
  h["hidden_size"] = c.hidden_size;
  h["max_doc_len"] = c.max_doc_len;
  h["filter_widths"] = c.filter_widths;
  h["filters_per_width"] = c.filters_per_width;
  h["dropout"] = c.dropout;
  h["forget_bias_init"] = c.forget_bias_init;
  h["learning_rate"] = c.learning_rate;
  h["batch_size"] = c.batch_size;
  h["max_epochs"] = c.max_epochs;
  h["patience"] = c.patience;
  h["seed"] = c.seed;
  h["vocab_size"] = model.vocabulary().size();
  h["tensor_count"] = model.parameters().size();
  h["provenance"] = model.provenance();
  return h;
}

TrainConfig config_from_header(const nlohmann::json& h) {
  TrainConfig c;
  c.model_kind = parse_model_kind(h.at("model_kind").get<std::string>());
  c.mode = parse_mode(h.at("mode").get<std::string>());
  c.embedding_dim = h.at("embedding_dim").get<std::size_t>();
  c.hidden_size = h.at("hidden_size").get<std::size_t>();
  c.max_doc_len = h.at("max_doc_len").get<std::size_t>();
  c.filter_widths = h.at("filter_widths").get<std::vector<std::size_t>>();
  c.filters_per_width = h.at("filters_per_width").get<std::size_t>();
  c.dropout = h.at("dropout").get<double>();
  c.forget_bias_init = h.at("forget_bias_init").get<double>();
  c.learning_rate = h.at("learning_rate").get<double>();
  c.batch_size = h.at("batch_size").get<std::size_t>();
  c.max_epochs = h.at("max_epochs").get<std::size_t>();
  c.patience = h.at("patience").get<std::size_t>();
  c.seed = h.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string serialize_model(const ClassifierModel& model) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.uint(kFormatVersion);
  const std::string header = header_json(model).dump();
  w.uint(static_cast<std::uint64_t>(header.size()));
  w.raw(header.data(), header.size());
  for (const std::string& token : model.vocabulary().tokens()) w.str32(token);
  for (const Tensor& t : model.parameters()) {
    w.str32(t.name);
    w.uint(static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) w.uint(static_cast<std::uint64_t>(d));
    for (double v : t.values) w.f64(v);
  }
  w.uint(fnv1a(w.bytes()));
  w.raw(kTrailer, sizeof(kTrailer));
  return std::move(w.bytes());
}

ClassifierModel deserialize_model(std::string_view bytes) {
  constexpr std::size_t kFooter = sizeof(std::uint64_t) + sizeof(kTrailer);
  if (bytes.size() < sizeof(kMagic) + kFooter ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a softskill checkpoint");
  }
  if (std::memcmp(bytes.data() + bytes.size() - sizeof(kTrailer), kTrailer,
                  sizeof(kTrailer)) != 0) {
    throw CheckpointError("checkpoint is truncated");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - kFooter);
  Reader footer(bytes.substr(body.size(), sizeof(std::uint64_t)));
  if (footer.uint<std::uint64_t>() != fnv1a(body)) {
    throw CheckpointError("checkpoint checksum mismatch (corrupt or truncated)");
  }

  Reader r(body);
  r.take(sizeof(kMagic));
  const auto version = r.uint<std::uint32_t>();
  if (version != kFormatVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = r.uint<std::uint64_t>();
  nlohmann::json header;
  TrainConfig config;
  try {
    header = nlohmann::json::parse(r.take(header_len));
    config = config_from_header(header);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  }

  const auto vocab_size = header.at("vocab_size").get<std::size_t>();
  if (vocab_size < Vocabulary::kReservedCount || vocab_size > r.remaining()) {
    throw CheckpointError("bad vocabulary size in checkpoint header");
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const std::string token = r.str32();
    if (i < Vocabulary::kReservedCount) {
      if (token != vocab.token(i)) throw CheckpointError("bad reserved vocabulary entry");
      continue;
    }
    if (vocab.add(token) != i) throw CheckpointError("duplicate vocabulary entry '" + token + "'");
  }

  ClassifierModel model = [&] {
    try {
      return ClassifierModel::skeleton(config, std::move(vocab));
    } catch (const ConfigError& e) {
      throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
    }
  }();
  auto& params = model.mutable_parameters();
  if (header.at("tensor_count").get<std::size_t>() != params.size()) {
    throw CheckpointError("tensor count does not match model architecture");
  }
  for (Tensor& expected : params) {
    const std::string name = r.str32();
    if (name != expected.name) {
      throw CheckpointError("expected tensor '" + expected.name + "', found '" + name + "'");
    }
    const auto rank = r.uint<std::uint32_t>();
    std::vector<std::size_t> shape(rank);
    for (std::size_t& d : shape) d = static_cast<std::size_t>(r.uint<std::uint64_t>());
    if (shape != expected.shape) {
      throw CheckpointError("shape mismatch for tensor '" + name + "'");
    }
    for (double& v : expected.values) v = r.f64();
  }
  if (r.remaining() != 0) throw CheckpointError("trailing bytes in checkpoint");
  model.set_provenance(header.value("provenance", std::string()));
  return model;
}

void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing checkpoint " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace softskill
