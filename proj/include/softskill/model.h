#ifndef SOFTSKILL_MODEL_H_
#define SOFTSKILL_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "softskill/embed.h"
#include "softskill/represent.h"
#include "softskill/rng.h"

namespace softskill {

enum class ModelKind { kMeanLogistic, kCnn, kLstm };

// "mean-logistic", "cnn", "lstm"
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);  // throws ConfigError

struct TrainConfig {
  ModelKind model_kind = ModelKind::kLstm;
  RepresentationMode mode = RepresentationMode::kUnmodified;
  double learning_rate = 0.001;
  std::size_t batch_size = 16;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  std::uint64_t seed = kDefaultSeed;
  double dropout = 0.2;
  std::size_t max_doc_len = 30;  // CNN
  std::size_t hidden_size = 100;  // LSTM
  std::vector<std::size_t> filter_widths = {2, 3, 4};  // CNN
  std::size_t filters_per_width = 50;  // CNN
  // Used when no embedding table is supplied; otherwise the table's dim.
  std::size_t embedding_dim = 100;
  double forget_bias_init = 1.0;  // LSTM

  // Defaults for a model kind: dropout 0.5 for CNN, 0.2 for LSTM, none for
  // the mean-embedding baseline.
  static TrainConfig for_model(ModelKind kind, RepresentationMode mode);

  void validate() const;  // throws ConfigError

  bool operator==(const TrainConfig&) const = default;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  bool operator==(const Tensor&) const = default;
};

// Token -> embedding row. Rows 0..4 are <pad>, <unk>, xxx, <begin>, <end>.
class Vocabulary {
 public:
  static constexpr std::size_t kPadId = 0;
  static constexpr std::size_t kUnkId = 1;
  static constexpr std::size_t kReservedCount = 5;

  Vocabulary();
  // Returns the id of `token`, adding it if new.
  std::size_t add(std::string_view token);
  std::size_t id(std::string_view token) const;  // kUnkId if absent
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  StringMap<std::size_t> index_;
};

struct Prediction {
  double probability_positive = 0.5;
  std::array<double, 2> logits{};  // {negative, positive}
};

// A trained (or freshly initialized) classifier: architecture settings,
// vocabulary and parameter tensors.
//
// Tensors by kind (embedding is always first, the dense layer last):
//   mean-logistic: embedding, dense.weight, dense.bias
//   lstm:  embedding, lstm.w_{input,forget,cell,output} [H x D],
//          lstm.u_{input,forget,cell,output} [H x H],
//          lstm.b_{input,forget,cell,output} [H], dense.weight, dense.bias
//   cnn:   embedding, conv<w>.weight [F x w*D], conv<w>.bias [F] per width,
//          dense.weight, dense.bias
// dense.weight is [2 x (features + skill_dim)], where skill_dim equals the
// embedding dim in masked-embed mode and 0 otherwise.
class ClassifierModel {
 public:
  // Builds the vocabulary (reserved entries, the table's words, then
  // `extra_words` not already present) and draws initial parameters from
  // `rng`. Embedding rows are copied from `table` where available.
  static ClassifierModel create(const TrainConfig& config,
                                const EmbeddingTable* table,
                                const std::vector<std::string>& extra_words,
                                Rng& rng);

  // Same architecture and vocabulary, parameters all zero. Used by the
  // checkpoint loader to validate shapes.
  static ClassifierModel skeleton(const TrainConfig& config, Vocabulary vocab);

  const TrainConfig& config() const { return config_; }
  ModelKind kind() const { return config_.model_kind; }
  RepresentationMode mode() const { return config_.mode; }
  std::size_t embedding_dim() const { return config_.embedding_dim; }
  std::size_t skill_dim() const;
  // Width of the network features fed to the dense layer, excluding the
  // skill vector.
  std::size_t feature_width() const;
  std::size_t dense_input_width() const { return feature_width() + skill_dim(); }

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  std::vector<Tensor>& mutable_parameters() { return params_; }
  const Tensor& parameter(std::string_view name) const;
  Tensor& parameter(std::string_view name);

  // Free-form provenance (config hash, seed) stored in checkpoints.
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string text) { provenance_ = std::move(text); }

  std::vector<std::size_t> encode(const TokenSequence& tokens) const;

  // Inference: no dropout, deterministic.
  Prediction predict(const RepresentedInput& input) const;
  // With train_mode set, inverted dropout masks are drawn from `rng`.
  Prediction forward(const RepresentedInput& input, bool train_mode,
                     Rng& rng) const;

  // Throws ConfigError / InputError when `input` cannot be fed to this
  // model (mode mismatch, missing or wrong-sized skill vector, no tokens).
  void check_input(const RepresentedInput& input) const;

  bool operator==(const ClassifierModel&) const = default;

 private:
  ClassifierModel(TrainConfig config, Vocabulary vocab);

  TrainConfig config_;
  Vocabulary vocab_;
  std::vector<Tensor> params_;
  std::string provenance_;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double validation_f1 = 0.0;
  double validation_accuracy = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_validation_f1 = 0.0;
  double best_validation_accuracy = 0.0;
  bool stopped_early = false;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

struct TrainResult {
  ClassifierModel model;
  TrainingLog log;
};

// Seeded shuffle, 50/50 train/validation split, minibatch Adam on
// cross-entropy with inverted dropout. Keeps the parameters of the epoch
// with the best validation F1-weighted and stops after `patience` epochs
// without improvement. Every example must be labeled and carry
// config.mode; both classes must be present.
TrainResult train(const std::vector<RepresentedInput>& dataset,
                  const TrainConfig& config,
                  const EmbeddingTable* embeddings = nullptr);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t checked = 0;  // parameter elements compared
};

inline constexpr double kGradientCheckStep = 1e-5;
// Central differences at the default step carry roundoff around 1e-11, so
// relative error is not measurable for gradients much smaller than this.
// Smaller entries are divided by the floor instead, which amounts to an
// absolute comparison.
inline constexpr double kGradientCheckFloor = 1e-6;

// Compares backpropagated gradients of the loss on (input, label) with
// central finite differences for every parameter element (dropout off).
// Relative error is |a - n| / max(|a|, |n|, kGradientCheckFloor).
GradientCheckResult gradient_check(const ClassifierModel& model,
                                   const RepresentedInput& input, Label label,
                                   double step = kGradientCheckStep);

// Same, on a small randomized model (dim 8, hidden 8) and random input.
GradientCheckResult gradient_check(ModelKind kind, RepresentationMode mode,
                                   std::uint64_t seed = kDefaultSeed);

// Versioned binary checkpoint; see README for the byte layout.
void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);
std::string serialize_model(const ClassifierModel& model);
ClassifierModel deserialize_model(std::string_view bytes);

}  // namespace softskill

#endif  // SOFTSKILL_MODEL_H_
