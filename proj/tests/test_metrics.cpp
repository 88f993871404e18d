#include <algorithm>
#include <numeric>
#include <random>

#include <doctest.h>

#include "egoloc/assignment.hpp"
#include "egoloc/metrics.hpp"
#include "oracles.hpp"

using namespace egoloc;

namespace {

Segmentation runs(std::initializer_list<Segment> s, std::size_t n) {
  return Segmentation{std::vector<Segment>(s), n};
}

} // namespace

TEST_CASE("ff1 examples") {
  const ClassScores same = ff1(LabelSeries({0, 1, 1, 3}), LabelSeries({0, 1, 1, 3}));
  CHECK(*same.mean() == 1.0);
  CHECK_FALSE(same.present(2));

  const ClassScores disjoint = ff1(LabelSeries({1, 1, 1}), LabelSeries({0, 0, 0}));
  CHECK(*disjoint.per_class[0] == 0.0);
  CHECK(*disjoint.per_class[1] == 0.0);

  const ClassScores s = ff1(LabelSeries({1, 1, 1, 2}), LabelSeries({1, 1, 2, 2}));
  CHECK(*s.per_class[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(*s.per_class[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_FALSE(s.present(0));
  CHECK(*s.mean() == doctest::Approx((0.8 + 2.0 / 3.0) / 2).epsilon(1e-15));

  CHECK(ff1(LabelSeries({1, 2}), LabelSeries({1, 2}), 5).per_class.size() == 5);
  CHECK_THROWS_AS(ff1(LabelSeries({1, 2}), LabelSeries({1})), Error);
}

TEST_CASE("interval_f1") {
  CHECK(interval_f1({0, 3, 2}, {2, 5, 2}) == 0.5);
  CHECK(interval_f1({0, 3, 2}, {4, 5, 2}) == 0.0);
  CHECK(interval_f1({4, 9, 1}, {4, 9, 1}) == 1.0);
  CHECK(interval_f1({0, 9, 1}, {0, 4, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("asf1 examples") {
  const Segmentation a = runs({{0, 2, 1}, {3, 5, 2}, {6, 6, 0}}, 7);
  const ClassScores same = asf1(a, a);
  CHECK(*same.mean() == 1.0);

  SUBCASE("a split ground-truth segment scores one third") {
    const Segmentation gt = runs({{0, 9, 1}, {10, 10, 0}}, 11);
    const Segmentation pred = runs({{0, 4, 1}, {5, 5, 2}, {6, 10, 1}}, 11);
    const ClassScores s = asf1(gt, pred);
    CHECK(*s.per_class[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(*s.per_class[0] == 0.0);
    CHECK(*s.per_class[2] == 0.0);
  }
  SUBCASE("single overlapping pair") {
    const Segmentation gt = runs({{0, 3, 2}, {4, 5, 1}}, 6);
    const Segmentation pred = runs({{0, 1, 1}, {2, 5, 2}}, 6);
    CHECK(*asf1(gt, pred).per_class[2] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("absent classes stay absent") {
    const ClassScores s = asf1(runs({{0, 4, 1}}, 5), runs({{0, 4, 1}}, 5), 4);
    CHECK(s.per_class.size() == 4);
    CHECK_FALSE(s.present(0));
    CHECK_FALSE(s.present(3));
    CHECK(*s.mean() == 1.0);
  }
  CHECK_THROWS_AS(asf1(runs({{0, 4, 1}}, 5), runs({{0, 5, 1}}, 6)), Error);
  CHECK_THROWS_AS(asf1(runs({{0, 3, 1}}, 5), runs({{0, 4, 1}}, 5)), Error);
}

TEST_CASE("confusion examples") {
  ConfusionMatrix c = confusion(LabelSeries({1, 1, 2}), LabelSeries({1, 1, 2}));
  CHECK(c(1, 1) == 2);
  CHECK(c(2, 2) == 1);
  CHECK(c.sum() == 3);

  c = confusion(LabelSeries({0, 0}), LabelSeries({1, 2}));
  CHECK(c(0, 1) == 1);
  CHECK(c(0, 2) == 1);
  CHECK(c.diagonal().sum() == 0);

  const Eigen::MatrixXd r = row_normalized(c);
  CHECK(r(0, 1) == 0.5);
  CHECK(r.row(1).isZero());
  CHECK_THROWS_AS(confusion(LabelSeries({1}), LabelSeries({1, 1})), Error);
}

TEST_CASE("metrics agree with brute-force oracles") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const int classes = 2 + static_cast<int>(rng() % 3);
    const auto g = oracle::random_runs(rng, n, classes, 6);
    const auto p = oracle::random_runs(rng, n, classes, 6);
    const LabelSeries gt(g), pred(p);

    const auto expected_ff1 = oracle::frame_f1(g, p, classes);
    const ClassScores got_ff1 = ff1(gt, pred, classes);
    REQUIRE(got_ff1.per_class.size() == expected_ff1.size());
    for (int c = 0; c < classes; ++c) CHECK(got_ff1.per_class[c] == expected_ff1[c]);

    const auto expected_asf1 = oracle::segment_f1(g, p, classes);
    const ClassScores got_asf1 =
        asf1(labels_to_segmentation(gt), labels_to_segmentation(pred), classes);
    for (int c = 0; c < classes; ++c) {
      REQUIRE(got_asf1.per_class[c].has_value() == expected_asf1[c].has_value());
      if (expected_asf1[c]) CHECK(std::abs(*got_asf1.per_class[c] - *expected_asf1[c]) <= 1e-12);
    }

    const ConfusionMatrix cm = confusion(gt, pred, classes);
    CHECK(cm.sum() == n);
    CHECK(cm.diagonal().sum() == std::inner_product(g.begin(), g.end(), p.begin(), 0L, std::plus<>(),
                                                    [](int a, int b) { return a == b ? 1L : 0L; }));
  }
}

TEST_CASE("scores are symmetric and invariant to class relabeling") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const auto g = oracle::random_runs(rng, n, 4, 7);
    const auto p = oracle::random_runs(rng, n, 4, 7);
    const ClassScores f = ff1(LabelSeries(g), LabelSeries(p), 4);
    const ClassScores f_swapped = ff1(LabelSeries(p), LabelSeries(g), 4);
    const ClassScores a = asf1(labels_to_segmentation(LabelSeries(g)), labels_to_segmentation(LabelSeries(p)), 4);
    const ClassScores a_swapped =
        asf1(labels_to_segmentation(LabelSeries(p)), labels_to_segmentation(LabelSeries(g)), 4);
    for (int c = 0; c < 4; ++c) {
      CHECK(f.per_class[c] == f_swapped.per_class[c]);
      REQUIRE(a.per_class[c].has_value() == a_swapped.per_class[c].has_value());
      if (a.per_class[c]) CHECK(*a.per_class[c] == doctest::Approx(*a_swapped.per_class[c]).epsilon(1e-12));
    }

    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabel = [&](std::vector<int> v) {
      for (auto &x : v) x = perm[x];
      return v;
    };
    const auto rg = relabel(g), rp = relabel(p);
    const ClassScores fr = ff1(LabelSeries(rg), LabelSeries(rp), 4);
    const ClassScores ar =
        asf1(labels_to_segmentation(LabelSeries(rg)), labels_to_segmentation(LabelSeries(rp)), 4);
    for (int c = 0; c < 4; ++c) {
      CHECK(fr.per_class[perm[c]] == f.per_class[c]);
      REQUIRE(ar.per_class[perm[c]].has_value() == a.per_class[c].has_value());
      if (a.per_class[c]) CHECK(*ar.per_class[perm[c]] == doctest::Approx(*a.per_class[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("asf1 is one exactly when the class's segments coincide") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const auto gs = labels_to_segmentation(LabelSeries(oracle::random_runs(rng, n, 3, 5)));
    const auto ps = labels_to_segmentation(LabelSeries(oracle::random_runs(rng, n, 3, 5)));
    const ClassScores s = asf1(gs, ps, 3);
    for (int c = 0; c < 3; ++c) {
      if (!s.per_class[c]) continue;
      std::vector<Segment> a, b;
      std::copy_if(gs.segments.begin(), gs.segments.end(), std::back_inserter(a),
                   [&](const Segment &x) { return x.class_id == c; });
      std::copy_if(ps.segments.begin(), ps.segments.end(), std::back_inserter(b),
                   [&](const Segment &x) { return x.class_id == c; });
      CHECK((*s.per_class[c] == 1.0) == (a == b));
      CHECK(*s.per_class[c] >= 0.0);
      CHECK(*s.per_class[c] <= 1.0);
    }
  }
}

TEST_CASE("assignment solver matches enumeration") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int cols = 1 + static_cast<int>(rng() % 5);
    Eigen::MatrixXd w(rows, cols);
    std::vector<std::vector<double>> wv(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) wv[i][j] = w(i, j) = (rng() % 4 == 0) ? 0.0 : u(rng);
    std::vector<bool> used(cols, false);
    const double best = oracle::best_matching(wv, 0, used);
    const Assignment a = solve_max_assignment(w);
    CHECK(a.total == doctest::Approx(best).epsilon(1e-12));

    double total = 0.0;
    std::vector<bool> taken(cols, false);
    REQUIRE(a.row_to_col.size() == static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
      const int j = a.row_to_col[i];
      if (j < 0) continue;
      REQUIRE(j < cols);
      CHECK_FALSE(taken[j]);
      taken[j] = true;
      total += w(i, j);
    }
    CHECK(total == doctest::Approx(a.total).epsilon(1e-12));
  }
}
