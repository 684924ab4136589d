#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "realign/losses.hpp"

using namespace realign;

namespace {

EmbeddingSequence random_seq(std::mt19937_64& rng, Index n, Index d) {
    std::normal_distribution<double> g;
    EmbeddingSequence s;
    s.data.resize(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) s.data(i, j) = g(rng);
    return s;
}

}  // namespace

TEST_CASE("cidm_loss degenerate cases") {
    LossConfig cfg;
    EmbeddingSequence one;
    one.data = Matrix::Zero(1, 3);
    CHECK(cidm_loss(one, cfg) == 0.0);

    EmbeddingSequence same;
    same.data = Matrix::Ones(5, 3);  // length <= delta+1, all pairs neighbors, d = 0
    CHECK(cidm_loss(same, cfg) == 0.0);
}

TEST_CASE("cidm_loss two frames at distance 3") {
    LossConfig cfg;  // delta 15, lambda3 2
    EmbeddingSequence x;
    x.data.resize(2, 1);
    x.data << 0.0, 3.0;
    // both ordered cross pairs are neighbors with gamma = 2 -> 2 * (3/2)
    CHECK(cidm_loss(x, cfg) == doctest::Approx(3.0));
}

TEST_CASE("cidm_loss is nonnegative and rigid-motion invariant") {
    std::mt19937_64 rng(31);
    LossConfig cfg;
    cfg.delta = 2;
    for (int trial = 0; trial < 10; ++trial) {
        EmbeddingSequence x = random_seq(rng, 8, 4);
        double base = cidm_loss(x, cfg);
        CHECK(base >= 0.0);
        // random orthogonal map + translation
        Matrix g(4, 4);
        std::normal_distribution<double> nd;
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) g(i, j) = nd(rng);
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        Eigen::RowVectorXd shift(4);
        for (Index j = 0; j < 4; ++j) shift(j) = nd(rng);
        EmbeddingSequence moved;
        moved.data = (x.data * q).rowwise() + shift;
        CHECK(cidm_loss(moved, cfg) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("cidm_gradient flat and coincident cases") {
    LossConfig cfg;
    EmbeddingSequence same;
    same.data = Matrix::Constant(4, 2, 0.3);  // coincident: subgradient 0
    CHECK(cidm_gradient(same, cfg).cwiseAbs().maxCoeff() == 0.0);

    // distant non-neighbors with d > lambda3: hinge inactive
    LossConfig far_cfg;
    far_cfg.delta = 0;
    EmbeddingSequence x;
    x.data.resize(2, 1);
    x.data << 0.0, 10.0;
    CHECK(cidm_gradient(x, far_cfg).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cidm_gradient matches central finite differences") {
    std::mt19937_64 rng(32);
    LossConfig cfg;
    cfg.delta = 1;
    int done = 0;
    while (done < 5) {
        EmbeddingSequence x = random_seq(rng, 5, 3);
        bool safe = true;
        for (Index i = 0; i < 5 && safe; ++i)
            for (Index j = i + 1; j < 5 && safe; ++j) {
                double d = (x.data.row(i) - x.data.row(j)).norm();
                if (d < 1e-3 || std::abs(d - cfg.lambda3) < 1e-3) safe = false;
            }
        if (!safe) continue;
        ++done;
        Matrix grad = cidm_gradient(x, cfg);
        const double h = 1e-5;
        for (Index i = 0; i < 5; ++i)
            for (Index d = 0; d < 3; ++d) {
                EmbeddingSequence xp = x, xm = x;
                xp.data(i, d) += h;
                xm.data(i, d) -= h;
                double fd = (cidm_loss(xp, cfg) - cidm_loss(xm, cfg)) / (2 * h);
                CHECK(std::abs(fd - grad(i, d)) <=
                      1e-5 * std::max(1.0, std::abs(grad(i, d))));
            }
    }
}

TEST_CASE("inter_loss on an identity-pattern plan decreases in the worst distance") {
    EmbeddingSequence x;
    x.data.resize(3, 2);
    x.data << 0, 0, 5, 0, 0, 5;
    TransportPlan plan;
    plan.n_real = plan.m_real = 3;
    plan.data = Matrix::Zero(4, 4);
    plan.data(0, 0) = plan.data(1, 1) = plan.data(2, 2) = 1.0;
    double loss = inter_loss(plan, x, x);
    // best_dist is 0, so loss = log(1 + exp(-worst_dist))
    CHECK(loss < std::log(2.0));
    CHECK(loss > 0.0);

    EmbeddingSequence far = x;
    far.data *= 3.0;  // worst distances grow, loss shrinks
    CHECK(inter_loss(plan, far, far) < loss);
}

TEST_CASE("inter_loss transpose symmetry and scale invariance") {
    std::mt19937_64 rng(33);
    EmbeddingSequence x = random_seq(rng, 4, 3);
    EmbeddingSequence y = random_seq(rng, 5, 3);
    TransportPlan plan;
    plan.n_real = 4;
    plan.m_real = 5;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    plan.data.resize(5, 6);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 6; ++j) plan.data(i, j) = u(rng);

    TransportPlan t;
    t.n_real = 5;
    t.m_real = 4;
    t.data = plan.data.transpose();
    CHECK(inter_loss(plan, x, y) == doctest::Approx(inter_loss(t, y, x)).epsilon(1e-14));

    TransportPlan scaled = plan;
    scaled.data *= 17.0;
    CHECK(inter_loss(plan, x, y) == inter_loss(scaled, x, y));
}

TEST_CASE("inter_loss matches a hand-selected oracle on a crafted plan") {
    EmbeddingSequence x, y;
    x.data.resize(3, 1);
    x.data << 0.0, 1.0, 2.0;
    y.data.resize(3, 1);
    y.data << 0.5, 1.5, 9.0;
    TransportPlan plan;
    plan.n_real = plan.m_real = 3;
    plan.data.resize(4, 4);
    plan.data << 0.6, 0.3, 0.1, 0.0,  //
        0.2, 0.5, 0.3, 0.0,           //
        0.1, 0.2, 0.7, 0.0,           //
        0.0, 0.0, 0.0, 0.0;
    LossConfig cfg;
    cfg.selection = InterSelection::Rows;
    // row argmax columns: 0, 1, 2 ; row argmin columns: 2, 0, 0
    double best = (std::abs(0.0 - 0.5) + std::abs(1.0 - 1.5) + std::abs(2.0 - 9.0)) / 3.0;
    double worst = (std::abs(0.0 - 9.0) + std::abs(1.0 - 0.5) + std::abs(2.0 - 0.5)) / 3.0;
    double mx = std::max(best, worst);
    double expect = mx + std::log(std::exp(best - mx) + std::exp(worst - mx)) - worst;
    CHECK(inter_loss(plan, x, y, cfg) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("realign_loss combination") {
    LossConfig cfg;
    RealignLossParts zero;
    CHECK(realign_loss(zero, cfg, 4, 5) == 0.0);

    RealignLossParts parts{2.5, 0.7, 0.9, 3.0};
    LossConfig only_obj = cfg;
    only_obj.c2 = 0.0;
    only_obj.c3 = 0.0;
    CHECK(realign_loss(parts, only_obj, 4, 5) == doctest::Approx(2.5 / 20.0));

    RealignLossParts unit{1.0, 1.0, 1.0, 1.0};
    CHECK(realign_loss(unit, cfg, 4, 5) ==
          doctest::Approx(1.0 / 20.0 + 2.0 * 0.5 + 0.0001));
}
