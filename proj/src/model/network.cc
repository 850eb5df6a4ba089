#include "model/network.h"

#include <algorithm>
#include <cmath>

namespace softskill::internal {
namespace {

constexpr std::size_t kEmbedding = 0;
constexpr std::size_t kGateCount = 4;  // input, forget, cell, output

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y += M x, M is rows x cols row-major.
void gemv_add(const double* m, std::size_t rows, std::size_t cols,
              const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

// y += M^T x
void gemv_t_add(const double* m, std::size_t rows, std::size_t cols,
                const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* row = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * xr;
  }
}

// M += a b^T
void outer_add(double* m, std::size_t rows, std::size_t cols, const double* a,
               const double* b) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    double* row = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += ar * b[c];
  }
}

// Dense layer on top of `features` (dropout applied in place). Returns the
// loss and fills dfeatures (post-mask) when grads are requested.
double dense_head(const ClassifierModel& model, std::vector<double>& features,
                  std::span<const double> dropout_scale, int label,
                  Gradients* grads, std::vector<double>* dfeatures,
                  std::array<double, 2>* logits_out) {
  const auto& params = model.parameters();
  const std::size_t w_index = params.size() - 2;
  const std::size_t b_index = params.size() - 1;
  const std::vector<double>& w = params[w_index].values;
  const std::vector<double>& b = params[b_index].values;
  const std::size_t width = features.size();

  if (!dropout_scale.empty()) {
    for (std::size_t k = 0; k < width; ++k) features[k] *= dropout_scale[k];
  }
  std::array<double, 2> logits{b[0], b[1]};
  gemv_add(w.data(), 2, width, features.data(), logits.data());
  if (logits_out != nullptr) *logits_out = logits;
  if (label < 0) return 0.0;

  const double m = std::max(logits[0], logits[1]);
  const double lse = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  const double loss = lse - logits[label];
  if (grads == nullptr) return loss;

  std::array<double, 2> dz{std::exp(logits[0] - lse), std::exp(logits[1] - lse)};
  dz[label] -= 1.0;
  outer_add(grads->tensors[w_index].data(), 2, width, dz.data(), features.data());
  grads->tensors[b_index][0] += dz[0];
  grads->tensors[b_index][1] += dz[1];

  dfeatures->assign(width, 0.0);
  gemv_t_add(w.data(), 2, width, dz.data(), dfeatures->data());
  if (!dropout_scale.empty()) {
    for (std::size_t k = 0; k < width; ++k) (*dfeatures)[k] *= dropout_scale[k];
  }
  return loss;
}

void append_skill(const ClassifierModel& model, const Example& ex,
                  std::vector<double>& features) {
  if (model.skill_dim() == 0) return;
  features.insert(features.end(), ex.skill_vector->begin(), ex.skill_vector->end());
}

void accumulate_embedding(Gradients* grads, std::size_t dim, std::size_t id,
                          const double* d) {
  if (id == Vocabulary::kPadId) return;
  grads->touch_row(id);
  double* row = grads->tensors[kEmbedding].data() + id * dim;
  for (std::size_t k = 0; k < dim; ++k) row[k] += d[k];
}

double run_mean_logistic(const ClassifierModel& model, const Example& ex,
                         std::span<const double> dropout_scale, Gradients* grads,
                         std::array<double, 2>* logits) {
  const std::size_t dim = model.embedding_dim();
  const std::vector<double>& emb = model.parameters()[kEmbedding].values;
  const double inv_n = 1.0 / static_cast<double>(ex.ids.size());

  std::vector<double> features(dim, 0.0);
  for (std::size_t id : ex.ids) {
    const double* row = emb.data() + id * dim;
    for (std::size_t k = 0; k < dim; ++k) features[k] += row[k];
  }
  for (double& v : features) v *= inv_n;
  append_skill(model, ex, features);

  std::vector<double> dfeatures;
  const double loss = dense_head(model, features, dropout_scale, ex.label, grads,
                                 &dfeatures, logits);
  if (grads == nullptr || ex.label < 0) return loss;

  std::vector<double> dmean(dfeatures.begin(), dfeatures.begin() + dim);
  for (double& v : dmean) v *= inv_n;
  for (std::size_t id : ex.ids) accumulate_embedding(grads, dim, id, dmean.data());
  return loss;
}

double run_lstm(const ClassifierModel& model, const Example& ex,
                std::span<const double> dropout_scale, Gradients* grads,
                std::array<double, 2>* logits) {
  const std::size_t dim = model.embedding_dim();
  const std::size_t hidden = model.config().hidden_size;
  const auto& params = model.parameters();
  const std::vector<double>& emb = params[kEmbedding].values;
  auto w = [&](std::size_t g) { return params[1 + g].values.data(); };
  auto u = [&](std::size_t g) { return params[1 + kGateCount + g].values.data(); };
  auto b = [&](std::size_t g) { return params[1 + 2 * kGateCount + g].values.data(); };

  const std::size_t steps = ex.ids.size();
  // Per step and gate: activated gate values. Also cell states and hiddens,
  // with index 0 holding the zero initial state.
  std::vector<double> gates(steps * kGateCount * hidden);
  std::vector<double> cells((steps + 1) * hidden, 0.0);
  std::vector<double> tanh_cells(steps * hidden);
  std::vector<double> hiddens((steps + 1) * hidden, 0.0);
  std::vector<double> pre(hidden);

  for (std::size_t t = 0; t < steps; ++t) {
    const double* x = emb.data() + ex.ids[t] * dim;
    const double* h_prev = hiddens.data() + t * hidden;
    double* gate_t = gates.data() + t * kGateCount * hidden;
    for (std::size_t g = 0; g < kGateCount; ++g) {
      std::copy(b(g), b(g) + hidden, pre.begin());
      gemv_add(w(g), hidden, dim, x, pre.data());
      gemv_add(u(g), hidden, hidden, h_prev, pre.data());
      double* out = gate_t + g * hidden;
      for (std::size_t k = 0; k < hidden; ++k) {
        out[k] = g == 2 ? std::tanh(pre[k]) : sigmoid(pre[k]);
      }
    }
    const double* in_g = gate_t;
    const double* forget_g = gate_t + hidden;
    const double* cell_g = gate_t + 2 * hidden;
    const double* out_g = gate_t + 3 * hidden;
    const double* c_prev = cells.data() + t * hidden;
    double* c = cells.data() + (t + 1) * hidden;
    double* tc = tanh_cells.data() + t * hidden;
    double* h = hiddens.data() + (t + 1) * hidden;
    for (std::size_t k = 0; k < hidden; ++k) {
      c[k] = forget_g[k] * c_prev[k] + in_g[k] * cell_g[k];
      tc[k] = std::tanh(c[k]);
      h[k] = out_g[k] * tc[k];
    }
  }

  std::vector<double> features(hiddens.end() - static_cast<std::ptrdiff_t>(hidden),
                               hiddens.end());
  append_skill(model, ex, features);
  std::vector<double> dfeatures;
  const double loss = dense_head(model, features, dropout_scale, ex.label, grads,
                                 &dfeatures, logits);
  if (grads == nullptr || ex.label < 0) return loss;

  std::vector<double> dh(dfeatures.begin(), dfeatures.begin() + hidden);
  std::vector<double> dc(hidden, 0.0);
  std::vector<double> dpre(kGateCount * hidden);
  std::vector<double> dx(dim);
  std::vector<double> dh_prev(hidden);
  for (std::size_t t = steps; t-- > 0;) {
    const double* gate_t = gates.data() + t * kGateCount * hidden;
    const double* in_g = gate_t;
    const double* forget_g = gate_t + hidden;
    const double* cell_g = gate_t + 2 * hidden;
    const double* out_g = gate_t + 3 * hidden;
    const double* c_prev = cells.data() + t * hidden;
    const double* tc = tanh_cells.data() + t * hidden;
    for (std::size_t k = 0; k < hidden; ++k) {
      const double d_out = dh[k] * tc[k];
      dc[k] += dh[k] * out_g[k] * (1.0 - tc[k] * tc[k]);
      const double d_in = dc[k] * cell_g[k];
      const double d_cell = dc[k] * in_g[k];
      const double d_forget = dc[k] * c_prev[k];
      dpre[k] = d_in * in_g[k] * (1.0 - in_g[k]);
      dpre[hidden + k] = d_forget * forget_g[k] * (1.0 - forget_g[k]);
      dpre[2 * hidden + k] = d_cell * (1.0 - cell_g[k] * cell_g[k]);
      dpre[3 * hidden + k] = d_out * out_g[k] * (1.0 - out_g[k]);
      dc[k] *= forget_g[k];
    }

    const std::size_t id = ex.ids[t];
    const double* x = emb.data() + id * dim;
    const double* h_prev = hiddens.data() + t * hidden;
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    for (std::size_t g = 0; g < kGateCount; ++g) {
      const double* dg = dpre.data() + g * hidden;
      outer_add(grads->tensors[1 + g].data(), hidden, dim, dg, x);
      outer_add(grads->tensors[1 + kGateCount + g].data(), hidden, hidden, dg, h_prev);
      double* db = grads->tensors[1 + 2 * kGateCount + g].data();
      for (std::size_t k = 0; k < hidden; ++k) db[k] += dg[k];
      gemv_t_add(w(g), hidden, dim, dg, dx.data());
      gemv_t_add(u(g), hidden, hidden, dg, dh_prev.data());
    }
    accumulate_embedding(grads, dim, id, dx.data());
    dh.swap(dh_prev);
  }
  return loss;
}

double run_cnn(const ClassifierModel& model, const Example& ex,
               std::span<const double> dropout_scale, Gradients* grads,
               std::array<double, 2>* logits) {
  const TrainConfig& cfg = model.config();
  const std::size_t dim = model.embedding_dim();
  const std::size_t len = cfg.max_doc_len;
  const std::size_t filters = cfg.filters_per_width;
  const auto& params = model.parameters();
  const std::vector<double>& emb = params[kEmbedding].values;

  // Truncate or pad with the (always zero) pad row.
  std::vector<std::size_t> ids(len, Vocabulary::kPadId);
  std::copy_n(ex.ids.begin(), std::min(len, ex.ids.size()), ids.begin());
  std::vector<double> input(len * dim);
  for (std::size_t p = 0; p < len; ++p) {
    std::copy_n(emb.data() + ids[p] * dim, dim, input.data() + p * dim);
  }

  const std::size_t widths = cfg.filter_widths.size();
  std::vector<double> features(widths * filters);
  std::vector<std::size_t> argmax(widths * filters);
  std::vector<double> pre_at_max(widths * filters);
  for (std::size_t wi = 0; wi < widths; ++wi) {
    const std::size_t width = cfg.filter_widths[wi];
    const std::size_t span = width * dim;
    const double* weight = params[1 + 2 * wi].values.data();
    const double* bias = params[2 + 2 * wi].values.data();
    for (std::size_t f = 0; f < filters; ++f) {
      const double* wf = weight + f * span;
      double best = 0.0;
      double best_pre = 0.0;
      std::size_t best_pos = 0;
      for (std::size_t p = 0; p + width <= len; ++p) {
        const double* window = input.data() + p * dim;
        double z = bias[f];
        for (std::size_t k = 0; k < span; ++k) z += wf[k] * window[k];
        const double a = z > 0.0 ? z : 0.0;
        if (p == 0 || a > best) {
          best = a;
          best_pre = z;
          best_pos = p;
        }
      }
      features[wi * filters + f] = best;
      argmax[wi * filters + f] = best_pos;
      pre_at_max[wi * filters + f] = best_pre;
    }
  }

  append_skill(model, ex, features);
  std::vector<double> dfeatures;
  const double loss = dense_head(model, features, dropout_scale, ex.label, grads,
                                 &dfeatures, logits);
  if (grads == nullptr || ex.label < 0) return loss;

  std::vector<double> dinput(len * dim, 0.0);
  for (std::size_t wi = 0; wi < widths; ++wi) {
    const std::size_t width = cfg.filter_widths[wi];
    const std::size_t span = width * dim;
    const double* weight = params[1 + 2 * wi].values.data();
    double* dweight = grads->tensors[1 + 2 * wi].data();
    double* dbias = grads->tensors[2 + 2 * wi].data();
    for (std::size_t f = 0; f < filters; ++f) {
      const std::size_t slot = wi * filters + f;
      if (pre_at_max[slot] <= 0.0) continue;
      const double dz = dfeatures[slot];
      if (dz == 0.0) continue;
      const std::size_t p = argmax[slot];
      const double* window = input.data() + p * dim;
      double* dwindow = dinput.data() + p * dim;
      const double* wf = weight + f * span;
      double* dwf = dweight + f * span;
      for (std::size_t k = 0; k < span; ++k) {
        dwf[k] += dz * window[k];
        dwindow[k] += dz * wf[k];
      }
      dbias[f] += dz;
    }
  }
  for (std::size_t p = 0; p < len; ++p) {
    accumulate_embedding(grads, dim, ids[p], dinput.data() + p * dim);
  }
  return loss;
}

}  // namespace

Gradients::Gradients(const ClassifierModel& model)
    : row_touched(model.vocabulary().size(), 0) {
  for (const Tensor& t : model.parameters()) {
    tensors.emplace_back(t.values.size(), 0.0);
  }
}

void Gradients::touch_row(std::size_t row) {
  if (!row_touched[row]) {
    row_touched[row] = 1;
    touched_rows.push_back(row);
  }
}

void Gradients::clear() {
  const std::size_t dim = touched_rows.empty()
                              ? 0
                              : tensors[kEmbedding].size() / row_touched.size();
  for (std::size_t row : touched_rows) {
    std::fill_n(tensors[kEmbedding].begin() + static_cast<std::ptrdiff_t>(row * dim),
                dim, 0.0);
    row_touched[row] = 0;
  }
  touched_rows.clear();
  for (std::size_t i = 1; i < tensors.size(); ++i) {
    std::fill(tensors[i].begin(), tensors[i].end(), 0.0);
  }
}

double run_network(const ClassifierModel& model, const Example& example,
                   std::span<const double> dropout_scale, Gradients* grads,
                   std::array<double, 2>* logits) {
  switch (model.kind()) {
    case ModelKind::kMeanLogistic:
      return run_mean_logistic(model, example, dropout_scale, grads, logits);
    case ModelKind::kLstm:
      return run_lstm(model, example, dropout_scale, grads, logits);
    case ModelKind::kCnn:
      return run_cnn(model, example, dropout_scale, grads, logits);
  }
  return 0.0;
}

std::vector<double> draw_dropout(const ClassifierModel& model, double rate,
                                 Rng& rng) {
  std::vector<double> scale(model.dense_input_width());
  const double keep = 1.0 / (1.0 - rate);
  for (double& s : scale) s = rng.uniform() < rate ? 0.0 : keep;
  return scale;
}

double softmax_positive(const std::array<double, 2>& logits) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  return e1 / (e0 + e1);
}

}  // namespace softskill::internal
