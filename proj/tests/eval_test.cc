#include "doctest.h"

#include <sstream>

#include "oracles.h"
#include "softskill/error.h"
#include "softskill/eval.h"
#include "softskill/rng.h"

using namespace softskill;

namespace {

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

struct Case {
  std::vector<double> scores;
  std::vector<Label> labels;
};

// Scores in [0, 1] with plenty of ties; positives skew high.
Case random_case(Rng& rng, std::size_t n) {
  Case c;
  const double grid = static_cast<double>(2 + rng.below(50));
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = rng.uniform() < 0.5;
    const double raw = std::min(1.0, std::max(0.0, rng.uniform() * 0.7 + (pos ? 0.3 : 0.0)));
    c.scores.push_back(std::round(raw * grid) / grid);
    c.labels.push_back(pos ? P : N);
  }
  return c;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("confusion and basic metrics") {
  const std::vector<double> s = {0.9, 0.8, 0.4, 0.3, 0.5};
  const std::vector<Label> l = {P, N, P, N, N};
  const Confusion c = confusion_at(s, l, 0.5);
  CHECK(c == Confusion{1, 2, 1, 1});
  CHECK(precision(c) == doctest::Approx(1.0 / 3));
  CHECK(recall(c) == doctest::Approx(0.5));
  CHECK(accuracy(c) == doctest::Approx(0.4));
  CHECK(precision(Confusion{0, 0, 3, 1}) == 0.0);
  CHECK(recall(Confusion{0, 1, 3, 0}) == 0.0);
  CHECK_THROWS_AS(confusion_at(s, std::vector<Label>{P}, 0.5), InputError);
}

TEST_CASE("f1_weighted worked example") {
  // pos: p=2/3 r=2/3; neg: p=3/4 r=3/4; supports 3 and 4.
  const Confusion c{2, 1, 3, 1};
  CHECK(f1_weighted(c) == doctest::Approx((3 * 2.0 / 3 + 4 * 0.75) / 7));
  CHECK(f1_weighted(Confusion{5, 0, 5, 0}) == 1.0);
  CHECK(f1_weighted(Confusion{0, 5, 0, 5}) == 0.0);
  CHECK_THROWS_AS(f1_weighted(Confusion{}), InputError);
}

TEST_CASE("property: f1_weighted matches the definition") {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    Confusion c{rng.below(200), rng.below(200), rng.below(200), rng.below(200)};
    if (c.total() == 0) continue;
    const double want = oracle::weighted_f1(double(c.tp), double(c.fp), double(c.tn), double(c.fn));
    CHECK(std::abs(f1_weighted(c) - want) <= 1e-9);
  }
}

TEST_CASE("calibration picks the highest recall at the target") {
  const std::vector<double> s = {0.95, 0.9, 0.8, 0.7, 0.6, 0.2};
  const std::vector<Label> l = {P, P, N, P, N, N};
  const Calibration c = calibrate_threshold(s, l, 0.75);
  CHECK_FALSE(c.target_unattained);
  CHECK(c.threshold == doctest::Approx(0.65));
  CHECK(c.precision == doctest::Approx(0.75));
  CHECK(c.recall == doctest::Approx(1.0));
}

TEST_CASE("unattainable target falls back to the best precision") {
  const std::vector<double> s = {0.9, 0.8, 0.1};
  const std::vector<Label> l = {N, P, P};
  const Calibration c = calibrate_threshold(s, l, 0.95);
  CHECK(c.target_unattained);
  CHECK(c.precision == doctest::Approx(2.0 / 3));
  CHECK(c.recall == doctest::Approx(1.0));
  CHECK(c.threshold == 0.0);
}

TEST_CASE("calibration rejects bad targets") {
  const std::vector<double> s = {0.5};
  const std::vector<Label> l = {P};
  CHECK_THROWS_AS(calibrate_threshold(s, l, 0.0), InputError);
  CHECK_THROWS_AS(calibrate_threshold(s, l, 1.5), InputError);
}

TEST_CASE("property: calibration equals the exhaustive sweep") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const Case k = random_case(rng, 1 + rng.below(300));
    const double target = 0.5 + 0.5 * rng.uniform();
    const Calibration got = calibrate_threshold(k.scores, k.labels, target);
    const oracle::Sweep want = oracle::exhaustive_calibration(k.scores, k.labels, target);
    REQUIRE(got.threshold == want.threshold);
    CHECK(double(got.confusion.tp) == want.tp);
    CHECK(double(got.confusion.fp) == want.fp);
    CHECK(double(got.confusion.tn) == want.tn);
    CHECK(double(got.confusion.fn) == want.fn);
    CHECK(got.target_unattained == !want.attained);
    const bool attainable = oracle::precision_attainable(k.scores, k.labels, target);
    CHECK(got.target_unattained == !attainable);
    if (attainable) CHECK(got.precision >= target);
  }
}

TEST_CASE("property: recall is monotone in the threshold") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const Case k = random_case(rng, 50);
    double prev = 2.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      const double r = recall(confusion_at(k.scores, k.labels, t));
      CHECK(r <= prev);
      prev = r;
    }
  }
}

TEST_CASE("naive baseline and report") {
  const std::vector<Label> l = {P, P, N, P};
  CHECK(naive_baseline(l).precision == doctest::Approx(0.75));
  CHECK(naive_baseline(l).recall == 1.0);
  const std::vector<double> s = {0.9, 0.8, 0.1, 0.7};
  const EvalReport r = evaluate_scores(s, l, 0.95);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1_weighted == 1.0);
  std::ostringstream out;
  print_report(out, r);
  CHECK(out.str().find("100.00") != std::string::npos);
}

TEST_CASE("filter report counts and order") {
  std::vector<Snippet> snippets;
  std::vector<double> scores;
  auto add = [&](int skill, double score) {
    Snippet s;
    s.skill_id = skill;
    snippets.push_back(s);
    scores.push_back(score);
  };
  add(3, 0.9); add(3, 0.1); add(3, 0.2);
  add(1, 0.1); add(1, 0.2);
  add(2, 0.9); add(2, 0.8); add(2, 0.1); add(2, 0.7);
  add(5, 0.5);
  const FilterReport r = filter_report(snippets, scores, 0.5);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == FilterRecord{3, 3, 1});
  CHECK(r[1] == FilterRecord{1, 2, 0});
  CHECK(r[2] == FilterRecord{2, 4, 3});
  CHECK(r[3] == FilterRecord{5, 1, 1});
}

TEST_CASE("property: filter report agrees with a recount") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Snippet> snippets(1 + rng.below(200));
    std::vector<double> scores;
    for (Snippet& s : snippets) {
      s.skill_id = static_cast<int>(rng.below(15));
      scores.push_back(std::round(rng.uniform() * 10) / 10);
    }
    const double t = std::round(rng.uniform() * 10) / 10;
    const auto want = oracle::recount_filter(snippets, scores, t);
    const FilterReport got = filter_report(snippets, scores, t);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& w = want.at(got[i].skill_id);
      CHECK(got[i].raw_count == w.raw);
      CHECK(got[i].filtered_count == w.kept);
      if (i > 0) {
        const auto removed = [](const FilterRecord& f) { return f.raw_count - f.filtered_count; };
        CHECK(removed(got[i - 1]) >= removed(got[i]));
      }
    }
  }
}

}  // TEST_SUITE
