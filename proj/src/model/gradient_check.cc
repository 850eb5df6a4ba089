#include <algorithm>
#include <cmath>

#include "model/network.h"
#include "softskill/model.h"

namespace softskill {
namespace {

double loss_of(const ClassifierModel& model, const internal::Example& ex) {
  return internal::run_network(model, ex, {}, nullptr, nullptr);
}

}  // namespace

GradientCheckResult gradient_check(const ClassifierModel& model,
                                   const RepresentedInput& input, Label label,
                                   double step) {
  model.check_input(input);
  const internal::Example ex{model.encode(input.tokens),
                             model.skill_dim() > 0 ? &*input.skill_vector : nullptr,
                             label == Label::kPositive ? 1 : 0};

  internal::Gradients grads(model);
  internal::run_network(model, ex, {}, &grads, nullptr);

  ClassifierModel probe = model;
  auto& params = probe.mutable_parameters();
  const std::size_t dim = model.embedding_dim();
  GradientCheckResult result;
  for (std::size_t ti = 0; ti < params.size(); ++ti) {
    std::vector<double>& values = params[ti].values;
    // The pad row is a constant, not a parameter.
    const std::size_t first = ti == 0 ? Vocabulary::kPadId * dim + dim : 0;
    for (std::size_t k = first; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + step;
      const double plus = loss_of(probe, ex);
      values[k] = saved - step;
      const double minus = loss_of(probe, ex);
      values[k] = saved;

      const double numeric = (plus - minus) / (2.0 * step);
      const double analytic = grads.tensors[ti][k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradientCheckFloor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = params[ti].name;
        result.worst_index = k;
      }
    }
  }
  return result;
}

GradientCheckResult gradient_check(ModelKind kind, RepresentationMode mode,
                                   std::uint64_t seed) {
  TrainConfig config = TrainConfig::for_model(kind, mode);
  config.embedding_dim = 8;
  config.hidden_size = 8;
  config.filters_per_width = 4;
  config.max_doc_len = 16;
  config.dropout = 0.0;
  config.seed = seed;

  Rng rng(seed);
  std::vector<std::string> words;
  for (int i = 0; i < 10; ++i) words.push_back("w" + std::to_string(i));
  ClassifierModel model = ClassifierModel::create(config, nullptr, words, rng);

  auto& params = model.mutable_parameters();
  for (std::size_t ti = 0; ti < params.size(); ++ti) {
    auto& values = params[ti].values;
    const std::size_t first = ti == 0 ? config.embedding_dim : 0;
    for (std::size_t k = first; k < values.size(); ++k) values[k] = rng.uniform(-0.5, 0.5);
  }

  auto random_words = [&](std::size_t lo, std::size_t hi) {
    TokenSequence out(lo + rng.below(hi - lo + 1));
    for (std::string& t : out) t = words[rng.below(words.size())];
    return out;
  };
  Snippet snippet;
  snippet.left = random_words(0, 5);
  snippet.skill = random_words(1, 3);
  snippet.right = random_words(0, 5);

  EmbeddingTable table(config.embedding_dim, seed);
  for (const std::string& w : words) {
    std::vector<double> v(config.embedding_dim);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    table.add(w, v);
  }
  const RepresentedInput input = represent(snippet, mode, &table);
  return gradient_check(model, input, Label::kPositive);
}

}  // namespace softskill
