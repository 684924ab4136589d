#include <doctest.h>

#include <cmath>

#include "realign/evaluation.hpp"
#include "realign/synth.hpp"

using namespace realign;

TEST_CASE("generate_task is deterministic per seed") {
    SynthConfig cfg;
    cfg.k = 3;
    cfg.videos = 2;
    cfg.background_rate = 0.15;
    cfg.repeat_rate = 0.1;
    cfg.permute = true;
    cfg.seed = 77;
    SynthTask a = generate_task(cfg);
    SynthTask b = generate_task(cfg);
    REQUIRE(a.videos.size() == b.videos.size());
    for (size_t v = 0; v < a.videos.size(); ++v) {
        CHECK((a.videos[v].data.array() == b.videos[v].data.array()).all());
        CHECK(a.truths[v].labels == b.truths[v].labels);
        CHECK(a.truths[v].order == b.truths[v].order);
    }
    SynthConfig other = cfg;
    other.seed = 78;
    SynthTask c = generate_task(other);
    CHECK(c.videos[0].data.rows() * c.videos[0].data.cols() != 0);
}

TEST_CASE("no corruption yields contiguous identity-ordered steps") {
    SynthConfig cfg;
    cfg.k = 4;
    cfg.seed = 3;
    SynthPair p = generate_pair(cfg);
    CHECK(p.gt_x.order == std::vector<int>{0, 1, 2, 3});
    CHECK(p.gt_y.order == std::vector<int>{0, 1, 2, 3});
    int prev = -1;
    for (int l : p.gt_x.labels) {
        CHECK(l >= prev);  // non-decreasing step ids
        CHECK(l >= 0);
        prev = l;
    }
    // per-step counts in range
    for (int s = 0; s < 4; ++s) {
        int cnt = int(std::count(p.gt_x.labels.begin(), p.gt_x.labels.end(), s));
        CHECK(cnt >= cfg.frames_per_step_min);
        CHECK(cnt <= cfg.frames_per_step_max);
    }
}

TEST_CASE("permutation recorded exactly and non-identity") {
    SynthConfig cfg;
    cfg.k = 3;
    cfg.permute = true;
    cfg.videos = 2;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        SynthTask t = generate_task(cfg);
        CHECK(t.truths[0].order == std::vector<int>{0, 1, 2});
        std::vector<int> sorted = t.truths[1].order;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2});
        CHECK(t.truths[1].order != std::vector<int>{0, 1, 2});
        // y's label sequence follows its recorded order
        std::vector<int> seen;
        for (int l : t.truths[1].labels)
            if (seen.empty() || seen.back() != l) seen.push_back(l);
        // with no repeats every step appears exactly once, in order
        CHECK(seen == t.truths[1].order);
    }
}

TEST_CASE("background count follows the insertion binomial") {
    // one background frame is inserted after each real frame with probability
    // p = r/(1-r); over many seeds the pooled count must sit inside a
    // 5-sigma binomial band around p * n_real
    SynthConfig cfg;
    cfg.k = 4;
    cfg.background_rate = 0.2;
    cfg.videos = 1;
    const double p = 0.2 / 0.8;
    long bg = 0, real = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        cfg.seed = seed;
        SynthTask t = generate_task(cfg);
        for (int l : t.truths[0].labels)
            (l == kBackgroundLabel ? bg : real) += 1;
    }
    double mean = p * double(real);
    double sd = std::sqrt(double(real) * p * (1.0 - p));
    CHECK(double(bg) >= mean - 5.0 * sd);
    CHECK(double(bg) <= mean + 5.0 * sd);
}

TEST_CASE("real frames stay near their centroid at Gaussian rates") {
    SynthConfig cfg;
    cfg.k = 3;
    cfg.noise_sigma = 1.0;
    cfg.videos = 1;
    long outliers = 0, coords = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        cfg.seed = seed;
        SynthTask t = generate_task(cfg);
        const auto& gt = t.truths[0].labels;
        for (size_t f = 0; f < gt.size(); ++f) {
            if (gt[f] < 0) continue;
            Eigen::RowVectorXd diff =
                t.videos[0].data.row(Index(f)) - t.centroids.row(gt[f]);
            for (Index d = 0; d < diff.size(); ++d) {
                ++coords;
                if (std::abs(diff(d)) > 3.0 * cfg.noise_sigma) ++outliers;
            }
        }
    }
    // per-coordinate 3-sigma exceedance rate is 0.27%; allow a 5-sigma band
    double rate = double(outliers) / double(coords);
    double expect = 0.0026998;
    double sd = std::sqrt(expect * (1 - expect) / double(coords));
    CHECK(rate <= expect + 5.0 * sd);
    CHECK(rate >= expect - 5.0 * sd);
}

TEST_CASE("background frames sit far from every centroid") {
    SynthConfig cfg;
    cfg.k = 4;
    cfg.background_rate = 0.3;
    cfg.noise_sigma = 0.5;
    cfg.videos = 1;
    cfg.seed = 11;
    SynthTask t = generate_task(cfg);
    const auto& gt = t.truths[0].labels;
    for (size_t f = 0; f < gt.size(); ++f) {
        if (gt[f] != kBackgroundLabel) continue;
        for (int c = 0; c < cfg.k; ++c) {
            double d = (t.videos[0].data.row(Index(f)) - t.centroids.row(c)).norm();
            CHECK(d >= 2.0 * cfg.step_separation);
        }
    }
}

TEST_CASE("centroids honor the separation floor") {
    SynthConfig cfg;
    cfg.k = 5;
    cfg.dim = 8;
    cfg.seed = 21;
    SynthTask t = generate_task(cfg);
    for (int a = 0; a < cfg.k; ++a)
        for (int b = a + 1; b < cfg.k; ++b)
            CHECK((t.centroids.row(a) - t.centroids.row(b)).norm() >=
                  cfg.step_separation - 1e-9);
}

TEST_CASE("infeasible and invalid configs are rejected") {
    SynthConfig bad;
    bad.k = 20;
    bad.dim = 16;  // separation impossible: dim < k
    CHECK_THROWS_AS(generate_task(bad), std::invalid_argument);

    SynthConfig rates;
    rates.background_rate = 0.6;
    rates.repeat_rate = 0.5;
    CHECK_THROWS_AS(generate_task(rates), std::invalid_argument);
}
