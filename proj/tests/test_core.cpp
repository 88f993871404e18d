#include <random>

#include <doctest.h>

#include "egoloc/core.hpp"
#include "oracles.hpp"

using namespace egoloc;

namespace {

std::vector<Segment> segs(std::initializer_list<Segment> s) { return s; }

} // namespace

TEST_CASE("labels_to_segmentation builds maximal runs") {
  CHECK(labels_to_segmentation(LabelSeries({1, 1, 2, 2, 0})).segments ==
        segs({{0, 1, 1}, {2, 3, 2}, {4, 4, 0}}));
  CHECK(labels_to_segmentation(LabelSeries({3})).segments == segs({{0, 0, 3}}));
  CHECK(labels_to_segmentation(LabelSeries({1, 2, 1})).segments ==
        segs({{0, 0, 1}, {1, 1, 2}, {2, 2, 1}}));
  CHECK(labels_to_segmentation(LabelSeries({1, 2, 1})).total_frames == 3);
}

TEST_CASE("empty label series is rejected") {
  CHECK_THROWS_WITH_AS(LabelSeries(std::vector<ClassId>{}), "empty series", Error);
  CHECK_THROWS_WITH_AS(labels_to_segmentation(LabelSeries{}), "empty series", Error);
}

TEST_CASE("segmentation_to_labels expands segments") {
  CHECK(segmentation_to_labels(Segmentation{segs({{0, 1, 1}, {2, 2, 0}}), 3}).labels ==
        std::vector<ClassId>{1, 1, 0});
  CHECK(segmentation_to_labels(Segmentation{segs({{0, 0, 5}}), 1}).labels ==
        std::vector<ClassId>{5});
  const LabelSeries l({1, 1, 2, 0, 0});
  CHECK(segmentation_to_labels(labels_to_segmentation(l)) == l);
}

TEST_CASE("tiling violations are reported") {
  const char *msg = "non-contiguous segmentation";
  CHECK_THROWS_WITH_AS(segmentation_to_labels(Segmentation{segs({{0, 1, 1}, {3, 4, 2}}), 5}),
                       msg, Error);
  CHECK_THROWS_WITH_AS(segmentation_to_labels(Segmentation{segs({{1, 4, 1}}), 5}), msg, Error);
  CHECK_THROWS_WITH_AS(segmentation_to_labels(Segmentation{segs({{0, 3, 1}}), 5}), msg, Error);
  CHECK_THROWS_WITH_AS(segmentation_to_labels(Segmentation{segs({{0, 2, 1}, {2, 4, 2}}), 5}),
                       msg, Error);
  CHECK_THROWS_WITH_AS(segmentation_to_labels(Segmentation{{}, 0}), msg, Error);
  CHECK_FALSE(is_valid(Segmentation{segs({{0, 1, 1}, {2, 4, 1}}), 5}));
  CHECK(is_valid(Segmentation{segs({{0, 1, 1}, {2, 4, 2}}), 5}));
}

TEST_CASE("round trip holds for random label sequences") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const LabelSeries l(oracle::random_runs(rng, n, 4, 8));
    const Segmentation seg = labels_to_segmentation(l);
    CHECK(is_valid(seg));
    CHECK(segmentation_to_labels(seg) == l);
    CHECK(labels_to_segmentation(segmentation_to_labels(seg)) == seg);
  }
}

TEST_CASE("dwell_times divides frame counts by the frame rate") {
  const ClassCatalog catalog(3);
  Eigen::VectorXd d = dwell_times(labels_to_segmentation(LabelSeries({1, 1, 2, 2, 0})), catalog, 1.0);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 2.0);
  CHECK(d[2] == 2.0);
  CHECK(d[3] == 0.0);

  d = dwell_times(labels_to_segmentation(LabelSeries({1, 1, 1, 1})), catalog, 2.0);
  CHECK(d[1] == 2.0);
  CHECK(d.sum() == 2.0);

  // 7202 frames of one room at 24 fps.
  const ClassCatalog nine(9);
  d = dwell_times(Segmentation{segs({{0, 7201, 3}}), 7202}, nine, 24.0);
  CHECK(d[3] == doctest::Approx(7202.0 / 24.0).epsilon(1e-15));
  CHECK(d[3] == doctest::Approx(300.0833333333).epsilon(1e-10));

  CHECK_THROWS_AS(dwell_times(Segmentation{segs({{0, 0, 1}}), 1}, catalog, 0.0), Error);
}

TEST_CASE("dwell times sum to N / frame_rate") {
  std::mt19937 rng(11);
  const ClassCatalog catalog(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 500);
    const double fps = 1.0 + (rng() % 60);
    const auto seg = labels_to_segmentation(LabelSeries(oracle::random_runs(rng, n, 6, 10)));
    CHECK(dwell_times(seg, catalog, fps).sum() == doctest::Approx(n / fps).epsilon(1e-12));
  }
}

TEST_CASE("catalog and posterior invariants") {
  const ClassCatalog catalog(2);
  CHECK(catalog.name(0) == "negative");
  CHECK(catalog.num_classes() == 3);
  CHECK_THROWS_AS(ClassCatalog(0), Error);
  CHECK_THROWS_AS(LabelSeries({1, 3}).check_catalog(catalog), Error);

  PosteriorMatrixXd rows(1, 2);
  rows << 0.7, 0.3;
  CHECK_NOTHROW(PosteriorSeries(rows, PosteriorKind::positive_only));
  rows << 0.7, 0.2;
  CHECK_THROWS_AS(PosteriorSeries(rows, PosteriorKind::positive_only), Error);
  rows << 1.2, -0.2;
  CHECK_THROWS_AS(PosteriorSeries(rows, PosteriorKind::positive_only), Error);
  PosteriorMatrixXd one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(PosteriorSeries(one, PosteriorKind::merged), Error);
}
