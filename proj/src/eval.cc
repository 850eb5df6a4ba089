#include "softskill/eval.h"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

#include "softskill/error.h"
#include "softskill/model.h"
#include "softskill/represent.h"

namespace softskill {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double class_f1(std::size_t hit, std::size_t false_alarm, std::size_t miss) {
  if (hit + false_alarm == 0 || hit + miss == 0) return 0.0;
  const double p = ratio(hit, hit + false_alarm);
  const double r = ratio(hit, hit + miss);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void check_lengths(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw InputError("scores and labels differ in length");
  }
  if (scores.empty()) throw InputError("no scores to evaluate");
}

}  // namespace

Confusion confusion_at(std::span<const double> scores,
                       std::span<const Label> labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw InputError("scores and labels differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == Label::kPositive;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double precision(const Confusion& c) { return ratio(c.tp, c.tp + c.fp); }
double recall(const Confusion& c) { return ratio(c.tp, c.tp + c.fn); }
double accuracy(const Confusion& c) { return ratio(c.tp + c.tn, c.total()); }

double f1_weighted(const Confusion& c) {
  const std::size_t total = c.total();
  if (total == 0) throw InputError("f1_weighted of an empty confusion matrix");
  const double f1_pos = class_f1(c.tp, c.fp, c.fn);
  const double f1_neg = class_f1(c.tn, c.fn, c.fp);
  const double w_pos = ratio(c.tp + c.fn, total);
  const double w_neg = ratio(c.tn + c.fp, total);
  return w_pos * f1_pos + w_neg * f1_neg;
}

Calibration calibrate_threshold(std::span<const double> scores,
                                std::span<const Label> labels,
                                double target_precision) {
  check_lengths(scores, labels);
  if (!(target_precision > 0.0 && target_precision <= 1.0)) {
    throw InputError("target precision must be in (0, 1]");
  }

  // Scores ascending, with a suffix count of positives so that the
  // confusion at any threshold is two binary searches away.
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> sorted(scores.size());
  std::vector<std::size_t> positives_from(scores.size() + 1, 0);
  for (std::size_t i = order.size(); i-- > 0;) {
    sorted[i] = scores[order[i]];
    positives_from[i] = positives_from[i + 1] +
                        (labels[order[i]] == Label::kPositive ? 1 : 0);
  }
  const std::size_t total_pos = positives_from[0];
  const std::size_t total_neg = scores.size() - total_pos;

  std::vector<double> candidates{0.0};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i] != sorted[i + 1]) {
      candidates.push_back((sorted[i] + sorted[i + 1]) / 2.0);
    }
  }
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());

  Calibration best;
  bool have_attained = false;
  bool have_any = false;
  for (double t : candidates) {
    const auto first = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    Confusion c;
    c.tp = positives_from[first];
    c.fp = (sorted.size() - first) - c.tp;
    c.fn = total_pos - c.tp;
    c.tn = total_neg - c.fp;
    if (c.tp + c.fp == 0) continue;

    const double p = precision(c);
    const double r = recall(c);
    const bool attained = p >= target_precision;
    bool take = false;
    if (attained) {
      take = !have_attained || r > best.recall;
    } else if (!have_attained) {
      take = !have_any || p > best.precision ||
             (p == best.precision && r > best.recall);
    }
    if (take) {
      best = Calibration{t, p, r, c, !attained};
      have_attained = have_attained || attained;
      have_any = true;
    }
  }
  return best;
}

NaiveBaseline naive_baseline(std::span<const Label> labels) {
  if (labels.empty()) throw InputError("naive baseline of an empty label set");
  const auto pos = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), Label::kPositive));
  return NaiveBaseline{ratio(pos, labels.size()), 1.0};
}

EvalReport evaluate_scores(std::span<const double> scores,
                           std::span<const Label> labels,
                           double target_precision) {
  const Calibration cal = calibrate_threshold(scores, labels, target_precision);
  EvalReport report;
  report.threshold = cal.threshold;
  report.target_precision = target_precision;
  report.target_unattained = cal.target_unattained;
  report.confusion = cal.confusion;
  report.precision = cal.precision;
  report.recall = cal.recall;
  report.f1_weighted = f1_weighted(cal.confusion);
  report.naive_precision = naive_baseline(labels).precision;
  return report;
}

void print_report(std::ostream& out, const EvalReport& r) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::fixed << std::setprecision(2);
  out << "precision: " << 100.0 * r.precision << '\n'
      << "recall: " << 100.0 * r.recall << '\n'
      << "f1_weighted: " << 100.0 * r.f1_weighted << '\n'
      << "naive_precision: " << 100.0 * r.naive_precision << '\n'
      << "naive_recall: 100.00\n"
      << "target_precision: " << 100.0 * r.target_precision << '\n'
      << std::setprecision(6) << "threshold: " << r.threshold << '\n'
      << "target_unattained: " << (r.target_unattained ? "true" : "false") << '\n'
      << "tp: " << r.confusion.tp << '\n'
      << "fp: " << r.confusion.fp << '\n'
      << "tn: " << r.confusion.tn << '\n'
      << "fn: " << r.confusion.fn << '\n';
  out.flags(flags);
  out.precision(prec);
}

FilterReport filter_report(std::span<const Snippet> snippets,
                           std::span<const double> scores, double threshold) {
  if (snippets.size() != scores.size()) {
    throw InputError("snippets and scores differ in length");
  }
  std::map<int, FilterRecord> by_skill;
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    FilterRecord& rec = by_skill[snippets[i].skill_id];
    rec.skill_id = snippets[i].skill_id;
    ++rec.raw_count;
    if (scores[i] >= threshold) ++rec.filtered_count;
  }
  FilterReport report;
  report.reserve(by_skill.size());
  for (const auto& [id, rec] : by_skill) report.push_back(rec);
  std::stable_sort(report.begin(), report.end(),
                   [](const FilterRecord& a, const FilterRecord& b) {
                     const std::size_t da = a.raw_count - a.filtered_count;
                     const std::size_t db = b.raw_count - b.filtered_count;
                     if (da != db) return da > db;
                     return a.raw_count > b.raw_count;
                   });
  return report;
}

FilterReport filter_report(std::span<const Snippet> snippets,
                           const ClassifierModel& model, double threshold,
                           const EmbeddingTable* embeddings) {
  std::vector<double> scores;
  scores.reserve(snippets.size());
  for (const Snippet& s : snippets) {
    scores.push_back(
        model.predict(represent(s, model.mode(), embeddings)).probability_positive);
  }
  return filter_report(snippets, scores, threshold);
}

}  // namespace softskill
