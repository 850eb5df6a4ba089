#include <algorithm>
#include <cmath>

#include "model/network.h"
#include "softskill/error.h"
#include "softskill/model.h"

namespace softskill {
namespace {

constexpr const char* kGateNames[] = {"input", "forget", "cell", "output"};

void fill_uniform(std::vector<double>& values, double range, Rng& rng) {
  for (double& v : values) v = rng.uniform(-range, range);
}

Tensor make_tensor(std::string name, std::vector<std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return Tensor{std::move(name), std::move(shape), std::vector<double>(n, 0.0)};
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMeanLogistic:
      return "mean-logistic";
    case ModelKind::kCnn:
      return "cnn";
    case ModelKind::kLstm:
      return "lstm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  for (auto kind : {ModelKind::kMeanLogistic, ModelKind::kCnn, ModelKind::kLstm}) {
    if (text == to_string(kind)) return kind;
  }
  throw ConfigError("unknown model kind '" + std::string(text) +
                    "' (expected mean-logistic|cnn|lstm)");
}

TrainConfig TrainConfig::for_model(ModelKind kind, RepresentationMode mode) {
  TrainConfig config;
  config.model_kind = kind;
  config.mode = mode;
  switch (kind) {
    case ModelKind::kMeanLogistic:
      config.dropout = 0.0;
      break;
    case ModelKind::kCnn:
      config.dropout = 0.5;
      break;
    case ModelKind::kLstm:
      config.dropout = 0.2;
      break;
  }
  return config;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must be in [0, 1)");
  }
  if (embedding_dim < 1) throw ConfigError("embedding_dim must be >= 1");
  if (model_kind == ModelKind::kLstm && hidden_size < 1) {
    throw ConfigError("hidden_size must be >= 1");
  }
  if (model_kind == ModelKind::kCnn) {
    if (filter_widths.empty() || filters_per_width < 1) {
      throw ConfigError("CNN needs at least one filter width and one filter");
    }
    for (std::size_t w : filter_widths) {
      if (w < 1 || w > max_doc_len) {
        throw ConfigError("filter width " + std::to_string(w) +
                          " must be in [1, max_doc_len]");
      }
    }
  }
}

Vocabulary::Vocabulary() {
  for (std::string_view t : {std::string_view("<pad>"), std::string_view("<unk>"),
                             kMaskToken, kBeginTag, kEndTag}) {
    add(t);
  }
}

std::size_t Vocabulary::add(std::string_view token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const std::size_t id = tokens_.size();
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

std::size_t Vocabulary::id(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

ClassifierModel::ClassifierModel(TrainConfig config, Vocabulary vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.validate();
  const std::size_t dim = config_.embedding_dim;
  params_.push_back(make_tensor("embedding", {vocab_.size(), dim}));
  switch (config_.model_kind) {
    case ModelKind::kMeanLogistic:
      break;
    case ModelKind::kLstm: {
      const std::size_t h = config_.hidden_size;
      for (const char* g : kGateNames) {
        params_.push_back(make_tensor(std::string("lstm.w_") + g, {h, dim}));
      }
      for (const char* g : kGateNames) {
        params_.push_back(make_tensor(std::string("lstm.u_") + g, {h, h}));
      }
      for (const char* g : kGateNames) {
        params_.push_back(make_tensor(std::string("lstm.b_") + g, {h}));
      }
      break;
    }
    case ModelKind::kCnn:
      for (std::size_t w : config_.filter_widths) {
        const std::string prefix = "conv" + std::to_string(w);
        params_.push_back(make_tensor(prefix + ".weight",
                                      {config_.filters_per_width, w * dim}));
        params_.push_back(make_tensor(prefix + ".bias", {config_.filters_per_width}));
      }
      break;
  }
  params_.push_back(make_tensor("dense.weight", {2, dense_input_width()}));
  params_.push_back(make_tensor("dense.bias", {2}));
}

ClassifierModel ClassifierModel::skeleton(const TrainConfig& config,
                                          Vocabulary vocab) {
  return ClassifierModel(config, std::move(vocab));
}

ClassifierModel ClassifierModel::create(const TrainConfig& config,
                                        const EmbeddingTable* table,
                                        const std::vector<std::string>& extra_words,
                                        Rng& rng) {
  TrainConfig cfg = config;
  if (table != nullptr) cfg.embedding_dim = table->dim();

  Vocabulary vocab;
  if (table != nullptr) {
    for (const std::string& w : table->words()) vocab.add(w);
  }
  for (const std::string& w : extra_words) vocab.add(w);

  ClassifierModel model(cfg, std::move(vocab));
  const std::size_t dim = cfg.embedding_dim;

  std::vector<double>& emb = model.params_[0].values;
  for (std::size_t id = Vocabulary::kUnkId; id < model.vocab_.size(); ++id) {
    double* row = emb.data() + id * dim;
    const std::string& token = model.vocab_.token(id);
    if (table != nullptr && (id == Vocabulary::kUnkId || table->contains(token))) {
      const auto v = id == Vocabulary::kUnkId ? table->unk_vector() : table->lookup(token);
      std::copy(v.begin(), v.end(), row);
    } else {
      for (std::size_t k = 0; k < dim; ++k) {
        row[k] = rng.uniform(-EmbeddingTable::kInitRange, EmbeddingTable::kInitRange);
      }
    }
  }

  for (std::size_t i = 1; i < model.params_.size(); ++i) {
    Tensor& t = model.params_[i];
    const bool is_bias = t.shape.size() == 1;
    if (is_bias) {
      if (t.name == "lstm.b_forget") {
        std::fill(t.values.begin(), t.values.end(), cfg.forget_bias_init);
      }
      continue;
    }
    double range = 0.0;
    if (t.name.starts_with("lstm.")) {
      range = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_size));
    } else {
      range = 1.0 / std::sqrt(static_cast<double>(t.shape[1]));
    }
    fill_uniform(t.values, range, rng);
  }
  return model;
}

std::size_t ClassifierModel::skill_dim() const {
  return config_.mode == RepresentationMode::kMaskedWithEmbedding
             ? config_.embedding_dim
             : 0;
}

std::size_t ClassifierModel::feature_width() const {
  switch (config_.model_kind) {
    case ModelKind::kMeanLogistic:
      return config_.embedding_dim;
    case ModelKind::kLstm:
      return config_.hidden_size;
    case ModelKind::kCnn:
      return config_.filter_widths.size() * config_.filters_per_width;
  }
  return 0;
}

const Tensor& ClassifierModel::parameter(std::string_view name) const {
  for (const Tensor& t : params_) {
    if (t.name == name) return t;
  }
  throw ConfigError("model has no parameter '" + std::string(name) + "'");
}

Tensor& ClassifierModel::parameter(std::string_view name) {
  return const_cast<Tensor&>(std::as_const(*this).parameter(name));
}

std::vector<std::size_t> ClassifierModel::encode(const TokenSequence& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(vocab_.id(t));
  return ids;
}

void ClassifierModel::check_input(const RepresentedInput& input) const {
  if (input.mode != config_.mode) {
    throw ConfigError("input representation '" + std::string(to_string(input.mode)) +
                      "' does not match model representation '" +
                      std::string(to_string(config_.mode)) + "'");
  }
  if (input.tokens.empty()) throw InputError("input has no tokens");
  if (skill_dim() > 0) {
    if (!input.skill_vector) {
      throw InputError("masked-embed input is missing its skill vector");
    }
    if (input.skill_vector->size() != skill_dim()) {
      throw ConfigError("skill vector has dimension " +
                        std::to_string(input.skill_vector->size()) +
                        ", model expects " + std::to_string(skill_dim()));
    }
  }
}

Prediction ClassifierModel::predict(const RepresentedInput& input) const {
  check_input(input);
  internal::Example ex{encode(input.tokens),
                       skill_dim() > 0 ? &*input.skill_vector : nullptr, -1};
  Prediction p;
  internal::run_network(*this, ex, {}, nullptr, &p.logits);
  p.probability_positive = internal::softmax_positive(p.logits);
  return p;
}

Prediction ClassifierModel::forward(const RepresentedInput& input, bool train_mode,
                                    Rng& rng) const {
  if (!train_mode || config_.dropout == 0.0 ||
      config_.model_kind == ModelKind::kMeanLogistic) {
    return predict(input);
  }
  check_input(input);
  internal::Example ex{encode(input.tokens),
                       skill_dim() > 0 ? &*input.skill_vector : nullptr, -1};
  const std::vector<double> mask = internal::draw_dropout(*this, config_.dropout, rng);
  Prediction p;
  internal::run_network(*this, ex, mask, nullptr, &p.logits);
  p.probability_positive = internal::softmax_positive(p.logits);
  return p;
}

}  // namespace softskill
