#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "realign/evaluation.hpp"

using namespace realign;

TEST_CASE("hungarian obvious optima") {
    Matrix ident = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    std::vector<Index> m = hungarian(ident);
    for (Index i = 0; i < 3; ++i) CHECK(m[size_t(i)] == i);

    Matrix swap(2, 2);
    swap << 1.0, 0.0, 0.0, 1.0;
    std::vector<Index> m2 = hungarian(swap);
    CHECK(m2[0] == 1);
    CHECK(m2[1] == 0);

    CHECK_THROWS_AS(hungarian(Matrix()), std::invalid_argument);
}

TEST_CASE("hungarian on rectangular inputs") {
    Matrix wide(2, 4);
    wide << 5.0, 1.0, 9.0, 7.0,  //
        2.0, 8.0, 3.0, 6.0;
    std::vector<Index> m = hungarian(wide);
    double total = wide(0, m[0]) + wide(1, m[1]);
    CHECK(total == doctest::Approx(3.0));  // columns 1 and 0
}

TEST_CASE("hungarian equals brute force on random instances") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<Index> sz(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        Index n = sz(rng);
        Matrix cost(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) cost(i, j) = u(rng);
        std::vector<Index> match = hungarian(cost);
        double got = 0.0;
        for (Index i = 0; i < n; ++i) got += cost(i, match[size_t(i)]);
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double t = 0.0;
            for (Index i = 0; i < n; ++i) t += cost(i, perm[size_t(i)]);
            best = std::min(best, t);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
}

namespace {

SegmentLabeling make_pred(std::vector<int> labels) {
    SegmentLabeling s;
    s.background.assign(labels.size(), false);
    s.labels = std::move(labels);
    return s;
}

}  // namespace

TEST_CASE("framewise_metrics perfect prediction") {
    std::vector<int> gt = {0, 0, 1, 1, 2, 2};
    MetricsReport r = framewise_metrics(make_pred({0, 0, 1, 1, 2, 2}), gt, 3, 3);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.iou == 1.0);
}

TEST_CASE("framewise_metrics relabeling invariance") {
    std::vector<int> gt = {0, 0, 1, 1, 2, 2};
    MetricsReport r = framewise_metrics(make_pred({2, 2, 0, 0, 1, 1}), gt, 3, 3);
    CHECK(r.f1 == 1.0);
    CHECK(r.iou == 1.0);
}

TEST_CASE("framewise_metrics zero-overlap steps score zero") {
    // collapsing all frames onto one predicted label leaves the other gt
    // steps unmatched; each unmatched step scores 0 in every metric
    std::vector<int> gt = {0, 0, 1, 1, 2, 2};
    MetricsReport r = framewise_metrics(make_pred({0, 0, 0, 0, 0, 0}), gt, 3, 3);
    int zeros = 0;
    for (const auto& s : r.per_step)
        if (s.f1 == 0.0 && s.iou == 0.0 && s.recall == 0.0) ++zeros;
    CHECK(zeros == 2);
    CHECK(r.f1 < 1.0 / 2.0);
}

TEST_CASE("framewise_metrics hand-counted confusion") {
    // 10 frames, 2 steps: step 0 has 3 TP, 1 FP, 2 FN; step 1 perfect (4 frames)
    std::vector<int> gt, pred;
    for (int i = 0; i < 3; ++i) {  // TP for step 0
        gt.push_back(0);
        pred.push_back(0);
    }
    for (int i = 0; i < 2; ++i) {  // FN: gt 0 predicted as 2 (extra label)
        gt.push_back(0);
        pred.push_back(2);
    }
    gt.push_back(1);  // FP for step 0: gt 1 predicted 0
    pred.push_back(0);
    for (int i = 0; i < 4; ++i) {  // step 1 correct
        gt.push_back(1);
        pred.push_back(1);
    }
    MetricsReport r = framewise_metrics(make_pred(pred), gt, 3, 2);
    CHECK(r.per_step[0].iou == doctest::Approx(3.0 / 6.0));
    CHECK(r.per_step[0].precision == doctest::Approx(3.0 / 4.0));
    CHECK(r.per_step[0].recall == doctest::Approx(3.0 / 5.0));
    CHECK(r.per_step[1].iou == doctest::Approx(4.0 / 5.0));  // the FP frame joins step 0
    CHECK(r.iou == doctest::Approx(0.5 * (0.5 + 0.8)));
}

TEST_CASE("per-step IoU = F1/(2-F1) identity and IoU <= F1") {
    std::mt19937_64 rng(52);
    std::uniform_int_distribution<int> lab(0, 3);
    std::vector<int> gt(40), pred(40);
    for (int t = 0; t < 10; ++t) {
        for (auto& g : gt) g = lab(rng);
        for (auto& p : pred) p = lab(rng);
        MetricsReport r = framewise_metrics(make_pred(pred), gt, 4, 4);
        for (const auto& s : r.per_step) {
            CHECK(s.iou <= s.f1 + 1e-12);
            if (s.f1 > 0.0)
                CHECK(s.iou == doctest::Approx(s.f1 / (2.0 - s.f1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("background frames in both pred and gt leave metrics unchanged") {
    std::vector<int> gt = {0, 0, 1, 1};
    SegmentLabeling pred = make_pred({0, 0, 1, 1});
    MetricsReport base = framewise_metrics(pred, gt, 2, 2);

    std::vector<int> gt2 = gt;
    SegmentLabeling pred2 = pred;
    for (int i = 0; i < 3; ++i) {
        gt2.push_back(kBackgroundLabel);
        pred2.labels.push_back(0);
        pred2.background.push_back(true);
    }
    MetricsReport ext = framewise_metrics(pred2, gt2, 2, 2);
    CHECK(ext.precision == base.precision);
    CHECK(ext.recall == base.recall);
    CHECK(ext.f1 == base.f1);
    CHECK(ext.iou == base.iou);

    std::vector<int> too_short = {0};
    CHECK_THROWS_AS(framewise_metrics(pred, too_short, 2, 2), std::invalid_argument);
}

TEST_CASE("hungarian rejects non-finite costs") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(hungarian(bad), std::invalid_argument);
}
