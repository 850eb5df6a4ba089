#ifndef SOFTSKILL_EVAL_H_
#define SOFTSKILL_EVAL_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "softskill/embed.h"
#include "softskill/label.h"
#include "softskill/matcher.h"

namespace softskill {

class ClassifierModel;

// Positive class = skill describes the candidate.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

// Predicted positive iff score >= threshold.
Confusion confusion_at(std::span<const double> scores,
                       std::span<const Label> labels, double threshold);

// tp / (tp + fp), or 0 when nothing is predicted positive.
double precision(const Confusion& c);
// tp / (tp + fn), or 0 when there are no positives.
double recall(const Confusion& c);
double accuracy(const Confusion& c);

// Per-class F1 averaged with class-support weights. A 0/0 precision or
// recall makes that class's F1 zero. Throws InputError on an empty matrix.
double f1_weighted(const Confusion& c);

struct Calibration {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  Confusion confusion;
  bool target_unattained = false;
};

// Candidate thresholds are 0, 1 and the midpoints between consecutive
// distinct scores. Among candidates whose precision reaches the target the
// one with the highest recall wins (ties go to the lower threshold). If
// none reaches it, the highest-precision candidate is returned with
// target_unattained set. Candidates predicting nothing positive have no
// precision and are never chosen.
Calibration calibrate_threshold(std::span<const double> scores,
                                std::span<const Label> labels,
                                double target_precision);

struct NaiveBaseline {
  double precision = 0.0;
  double recall = 1.0;
};

// Every match accepted as a candidate skill.
NaiveBaseline naive_baseline(std::span<const Label> labels);

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1_weighted = 0.0;
  double threshold = 0.0;
  double target_precision = 0.0;
  bool target_unattained = false;
  Confusion confusion;
  double naive_precision = 0.0;
};

// Calibrates on (scores, labels) and reports metrics at that threshold.
EvalReport evaluate_scores(std::span<const double> scores,
                           std::span<const Label> labels,
                           double target_precision);

// Percentages with two decimals, one `key: value` per line.
void print_report(std::ostream& out, const EvalReport& report);

struct FilterRecord {
  int skill_id = 0;
  std::size_t raw_count = 0;
  std::size_t filtered_count = 0;  // matches kept at the threshold

  bool operator==(const FilterRecord&) const = default;
};

using FilterReport = std::vector<FilterRecord>;

// Per-skill counts before and after dropping matches scored below the
// threshold, sorted by (raw - filtered) descending, then raw count
// descending, then skill id.
FilterReport filter_report(std::span<const Snippet> snippets,
                           std::span<const double> scores, double threshold);

// Scores each snippet with `model` (represented in the model's mode).
FilterReport filter_report(std::span<const Snippet> snippets,
                           const ClassifierModel& model, double threshold,
                           const EmbeddingTable* embeddings = nullptr);

}  // namespace softskill

#endif  // SOFTSKILL_EVAL_H_
