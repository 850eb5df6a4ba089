#ifndef SOFTSKILL_MODEL_NETWORK_H_
#define SOFTSKILL_MODEL_NETWORK_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "softskill/model.h"

namespace softskill::internal {

// One encoded example. label is 0/1, or -1 when only logits are wanted.
struct Example {
  std::vector<std::size_t> ids;
  const std::vector<double>* skill_vector = nullptr;
  int label = -1;
};

// Gradient buffers shaped like the model parameters. Embedding rows are
// tracked so that only touched rows are cleared and updated.
struct Gradients {
  explicit Gradients(const ClassifierModel& model);

  void touch_row(std::size_t row);
  void clear();

  std::vector<std::vector<double>> tensors;
  std::vector<std::size_t> touched_rows;
  std::vector<char> row_touched;
};

// Runs the network on `example`. `dropout_scale` holds one multiplier per
// dense input (0 or 1/(1-p)); empty means no dropout. When `grads` is
// non-null the cross-entropy gradient for example.label is accumulated.
// Returns the loss (0 if label < 0).
double run_network(const ClassifierModel& model, const Example& example,
                   std::span<const double> dropout_scale, Gradients* grads,
                   std::array<double, 2>* logits);

// Draws an inverted-dropout mask of the model's dense input width.
std::vector<double> draw_dropout(const ClassifierModel& model, double rate,
                                 Rng& rng);

double softmax_positive(const std::array<double, 2>& logits);

}  // namespace softskill::internal

#endif  // SOFTSKILL_MODEL_NETWORK_H_
