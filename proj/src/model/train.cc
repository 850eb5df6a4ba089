#include <algorithm>
#include <cmath>
#include <sstream>

#include "model/network.h"
#include "softskill/error.h"
#include "softskill/eval.h"
#include "softskill/log.h"
#include "softskill/model.h"

namespace softskill {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

// Adam with per-row lazy updates for the embedding matrix: only rows that
// received gradient in the current batch have their moments advanced.
class Adam {
 public:
  Adam(const ClassifierModel& model, double learning_rate)
      : learning_rate_(learning_rate) {
    for (const Tensor& t : model.parameters()) {
      first_.emplace_back(t.values.size(), 0.0);
      second_.emplace_back(t.values.size(), 0.0);
    }
    dim_ = model.embedding_dim();
  }

  void step(ClassifierModel& model, const internal::Gradients& grads, double scale) {
    ++steps_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps_));
    auto& params = model.mutable_parameters();
    auto update = [&](std::size_t ti, std::size_t begin, std::size_t end) {
      std::vector<double>& p = params[ti].values;
      const std::vector<double>& g = grads.tensors[ti];
      std::vector<double>& m = first_[ti];
      std::vector<double>& v = second_[ti];
      for (std::size_t k = begin; k < end; ++k) {
        const double gk = g[k] * scale;
        m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * gk;
        v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * gk * gk;
        p[k] -= learning_rate_ * (m[k] / c1) / (std::sqrt(v[k] / c2) + kAdamEpsilon);
      }
    };
    std::vector<std::size_t> rows = grads.touched_rows;
    std::sort(rows.begin(), rows.end());
    for (std::size_t row : rows) update(0, row * dim_, (row + 1) * dim_);
    for (std::size_t ti = 1; ti < params.size(); ++ti) {
      update(ti, 0, params[ti].values.size());
    }
  }

 private:
  double learning_rate_;
  std::size_t dim_ = 0;
  std::size_t steps_ = 0;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
};

void validate_dataset(const std::vector<RepresentedInput>& dataset,
                      const TrainConfig& config, const EmbeddingTable* embeddings) {
  if (dataset.size() < 2) {
    throw TrainingError("training needs at least two labeled examples");
  }
  bool has_pos = false;
  bool has_neg = false;
  const std::size_t skill_dim =
      config.mode == RepresentationMode::kMaskedWithEmbedding
          ? (embeddings != nullptr ? embeddings->dim() : config.embedding_dim)
          : 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const RepresentedInput& ex = dataset[i];
    if (!ex.label) {
      throw InputError("training example " + std::to_string(i) + " has no label");
    }
    if (ex.mode != config.mode) {
      throw ConfigError("training example " + std::to_string(i) + " is '" +
                        std::string(to_string(ex.mode)) + "', config wants '" +
                        std::string(to_string(config.mode)) + "'");
    }
    if (ex.tokens.empty()) {
      throw InputError("training example " + std::to_string(i) + " has no tokens");
    }
    if (skill_dim > 0 && (!ex.skill_vector || ex.skill_vector->size() != skill_dim)) {
      throw InputError("training example " + std::to_string(i) +
                       " lacks a skill vector of dimension " + std::to_string(skill_dim));
    }
    (*ex.label == Label::kPositive ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw TrainingError("training data contains a single class");
  }
}

internal::Example encode_example(const ClassifierModel& model,
                                 const RepresentedInput& in) {
  return internal::Example{
      model.encode(in.tokens),
      model.skill_dim() > 0 ? &*in.skill_vector : nullptr,
      *in.label == Label::kPositive ? 1 : 0};
}

Confusion evaluate_split(const ClassifierModel& model,
                         const std::vector<internal::Example>& examples,
                         const std::vector<std::size_t>& indices) {
  Confusion c;
  for (std::size_t i : indices) {
    std::array<double, 2> logits{};
    internal::run_network(model, {examples[i].ids, examples[i].skill_vector, -1}, {},
                          nullptr, &logits);
    const bool predicted = internal::softmax_positive(logits) >= 0.5;
    const bool actual = examples[i].label == 1;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace

TrainResult train(const std::vector<RepresentedInput>& dataset,
                  const TrainConfig& config, const EmbeddingTable* embeddings) {
  config.validate();
  validate_dataset(dataset, config, embeddings);

  Rng rng(config.seed);

  std::vector<std::string> words;
  for (const RepresentedInput& ex : dataset) {
    words.insert(words.end(), ex.tokens.begin(), ex.tokens.end());
  }
  ClassifierModel model = ClassifierModel::create(config, embeddings, words, rng);
  const double dropout =
      model.kind() == ModelKind::kMeanLogistic ? 0.0 : model.config().dropout;

  std::vector<internal::Example> examples;
  examples.reserve(dataset.size());
  for (const RepresentedInput& ex : dataset) {
    examples.push_back(encode_example(model, ex));
  }

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  const std::size_t validation_size = dataset.size() / 2;
  std::vector<std::size_t> train_idx(order.begin(),
                                     order.end() - static_cast<std::ptrdiff_t>(validation_size));
  std::vector<std::size_t> valid_idx(order.end() - static_cast<std::ptrdiff_t>(validation_size),
                                     order.end());

  TrainResult result{model, {}};
  TrainingLog& log = result.log;
  log.train_size = train_idx.size();
  log.validation_size = valid_idx.size();

  Adam adam(model, config.learning_rate);
  internal::Gradients grads(model);
  std::vector<double> mask;
  std::size_t epochs_without_gain = 0;
  bool have_best = false;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(train_idx);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size) {
      const std::size_t end = std::min(train_idx.size(), start + config.batch_size);
      grads.clear();
      for (std::size_t k = start; k < end; ++k) {
        if (dropout > 0.0) mask = internal::draw_dropout(model, dropout, rng);
        const double loss =
            internal::run_network(model, examples[train_idx[k]], mask, &grads, nullptr);
        if (!std::isfinite(loss)) {
          std::ostringstream msg;
          msg << "non-finite loss at epoch " << epoch << ", example "
              << train_idx[k] << "; try a lower learning rate";
          throw TrainingError(msg.str());
        }
        loss_sum += loss;
      }
      adam.step(model, grads, 1.0 / static_cast<double>(end - start));
    }

    const Confusion c = evaluate_split(model, examples, valid_idx);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train_idx.size());
    rec.validation_f1 = c.total() > 0 ? f1_weighted(c) : 0.0;
    rec.validation_accuracy = accuracy(c);
    log.epochs.push_back(rec);

    if (!have_best || rec.validation_f1 > log.best_validation_f1) {
      have_best = true;
      log.best_epoch = epoch;
      log.best_validation_f1 = rec.validation_f1;
      log.best_validation_accuracy = rec.validation_accuracy;
      result.model = model;
      epochs_without_gain = 0;
    } else if (++epochs_without_gain >= config.patience) {
      log.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  return result;
}

}  // namespace softskill
